"""Exception hierarchy.

Validation problems (bad shapes, bad files) derive from ``ValueError``;
numerical refusals (singular operators, unstable systems, unreachable
targets) derive from :class:`NumericalRefusal` so callers such as the CLI
can tell the two apart.
"""

from __future__ import annotations


class MltiError(Exception):
    """Base class for all library errors."""


class ShapeError(MltiError, ValueError):
    """Operand shapes or pair structures are incompatible."""


class IndexBoundsError(MltiError, IndexError):
    """A 1-based multi-index falls outside the tensor shape."""

    def __init__(self, mode: int, index: int, extent: int):
        self.mode = mode
        self.index = index
        self.extent = extent
        super().__init__(
            f"index {index} out of range 1..{extent} at mode {mode}"
        )


class FileFormatError(MltiError, ValueError):
    """A system, tensor or trajectory file failed to parse or validate."""


class NumericalRefusal(MltiError):
    """An operation's numerical precondition does not hold."""


class SingularTensorError(NumericalRefusal):
    def __init__(self, condition: float):
        self.condition = condition
        super().__init__(
            f"unfolding is singular to working precision (condition estimate {condition:.3e})"
        )


class NoUniqueSolutionError(NumericalRefusal):
    def __init__(self, radius: float):
        self.radius = radius
        super().__init__(
            f"Lyapunov equation has no unique solution: spectral radius {radius:.6g} is not below 1"
        )


class DecompositionUnavailableError(NumericalRefusal):
    def __init__(self, clusters):
        # clusters: list of (eigenvalue, algebraic, geometric)
        self.clusters = list(clusters)
        desc = ", ".join(
            f"{lam:.6g} (algebraic {alg}, geometric {geo})"
            for lam, alg, geo in self.clusters
        )
        super().__init__(f"operator is defective; eigenvalue clusters: {desc}")


class UnreachableTargetError(NumericalRefusal):
    def __init__(self, horizon: int, rank: int, required: int):
        self.horizon = horizon
        self.rank = rank
        self.required = required
        super().__init__(
            f"reachability Gramian over horizon {horizon} is not U-positive definite; "
            f"rank_U of the reachability tensor is {rank}, need {required}"
        )


class SizeLimitError(NumericalRefusal):
    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(
            f"state dimension {size} exceeds the dense solver limit {limit}"
        )


class SolverError(NumericalRefusal):
    """The underlying dense eigen/linear solver failed to converge."""

"""Multilinear time-invariant systems in Einstein-product form.

A system is the triple ``(A, B, C)`` of paired tensors with

    X_{t+1} = A * X_t + B * U_t,     Y_t = C * X_t,

where the state has shape J, the input shape K and the output shape I, so
that A has pairs ``(J_n, J_n)``, B has pairs ``(J_n, K_n)`` and C has pairs
``(I_n, J_n)``.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .blocks import mode_col_block, mode_row_block
from .errors import (
    NoUniqueSolutionError,
    ShapeError,
    SizeLimitError,
    UnreachableTargetError,
)
from .spectral import USpectrum, eigenvalue_clusters, spectral_radius, u_eigen
from .tensor import (
    DenseTensor,
    PairedTensor,
    _require_square,
    einstein_apply,
    einstein_power,
    einstein_product,
    frobenius_norm,
    is_u_positive_definite,
    phi,
    phi_inverse,
    rank_u,
    tucker_product,
    u_inverse,
    u_transpose,
)
from .tolerance import DEFAULT_TOL, Tolerance

# largest prod(J) the dense vectorized Lyapunov solve accepts
LYAPUNOV_SIZE_LIMIT = 64


class TuckerFactors(NamedTuple):
    A: tuple[np.ndarray, ...]
    B: tuple[np.ndarray, ...]
    C: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class MltiSystem:
    A: PairedTensor
    B: PairedTensor
    C: PairedTensor
    tucker_factors: Optional[TuckerFactors] = None

    def __post_init__(self):
        A, B, C = self.A, self.B, self.C
        if not A.is_square:
            raise ShapeError(f"A must have square pairs, got {A.pairs}")
        J = A.row_shape
        if B.npairs != A.npairs or B.row_shape != J:
            raise ShapeError(f"B row shape {B.row_shape} does not match state shape {J}")
        if C.npairs != A.npairs or C.col_shape != J:
            raise ShapeError(f"C column shape {C.col_shape} does not match state shape {J}")
        if self.tucker_factors is not None:
            for name in ("A", "B", "C"):
                dense = getattr(self, name).array
                built = PairedTensor.from_factors(getattr(self.tucker_factors, name)).array
                if built.shape != dense.shape or not np.allclose(
                    built, dense, rtol=1e-12, atol=1e-12 * max(1.0, np.abs(dense).max())
                ):
                    raise ShapeError(f"operator {name} differs from the outer product of its factors")

    @classmethod
    def from_tucker(cls, A_factors, B_factors, C_factors) -> "MltiSystem":
        return from_tucker(A_factors, B_factors, C_factors)

    @property
    def order(self) -> int:
        return self.A.npairs

    @property
    def state_shape(self) -> tuple[int, ...]:
        return self.A.row_shape

    @property
    def input_shape(self) -> tuple[int, ...]:
        return self.B.col_shape

    @property
    def output_shape(self) -> tuple[int, ...]:
        return self.C.row_shape

    @property
    def state_dim(self) -> int:
        return math.prod(self.state_shape)

    def dual(self) -> "MltiSystem":
        """The system ``(A^T, C^T, B^T)``; swaps reachability and observability."""
        factors = None
        if self.tucker_factors is not None:
            f = self.tucker_factors
            factors = TuckerFactors(
                tuple(m.T for m in f.A), tuple(m.T for m in f.C), tuple(m.T for m in f.B)
            )
        return MltiSystem(
            u_transpose(self.A), u_transpose(self.C), u_transpose(self.B), factors
        )

    def unfolded(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """The equivalent LTI triple ``(phi(A), phi(B), phi(C))``."""
        return phi(self.A), phi(self.B), phi(self.C)


def from_tucker(A_factors: Sequence, B_factors: Sequence, C_factors: Sequence) -> MltiSystem:
    """Build a system from per-mode factor matrices.

    ``A_n`` is ``J_n x J_n``, ``B_n`` is ``J_n x K_n`` and ``C_n`` is ``I_n x J_n``.
    """
    mats = {}
    for name, factors in (("A", A_factors), ("B", B_factors), ("C", C_factors)):
        mats[name] = tuple(np.atleast_2d(np.asarray(m, dtype=np.float64)) for m in factors)
        for n, m in enumerate(mats[name], start=1):
            if m.ndim != 2:
                raise ShapeError(f"operator {name}, mode {n}: factor is not a matrix")
    N = len(mats["A"])
    for name in ("B", "C"):
        if len(mats[name]) != N:
            raise ShapeError(f"operator {name} has {len(mats[name])} factors, expected {N}")
    for n in range(N):
        a, b, c = mats["A"][n], mats["B"][n], mats["C"][n]
        if a.shape[0] != a.shape[1]:
            raise ShapeError(f"operator A, mode {n + 1}: factor {a.shape} is not square")
        if b.shape[0] != a.shape[0]:
            raise ShapeError(
                f"operator B, mode {n + 1}: factor has {b.shape[0]} rows, expected {a.shape[0]}"
            )
        if c.shape[1] != a.shape[0]:
            raise ShapeError(
                f"operator C, mode {n + 1}: factor has {c.shape[1]} columns, expected {a.shape[0]}"
            )
    return MltiSystem(
        PairedTensor.from_factors(mats["A"]),
        PairedTensor.from_factors(mats["B"]),
        PairedTensor.from_factors(mats["C"]),
        TuckerFactors(mats["A"], mats["B"], mats["C"]),
    )


# ---------------------------------------------------------------------------
# simulation


@dataclass(frozen=True)
class Trajectory:
    states: tuple[DenseTensor, ...]
    outputs: tuple[DenseTensor, ...]
    inputs: tuple[DenseTensor, ...]

    @property
    def steps(self) -> int:
        return len(self.inputs)


def _check_state(sys: MltiSystem, x0: DenseTensor) -> None:
    if x0.shape != sys.state_shape:
        raise ShapeError(f"initial state has shape {x0.shape}, expected {sys.state_shape}")


def _inputs(sys: MltiSystem, inputs, steps: int) -> list[DenseTensor]:
    if steps < 0:
        raise ValueError("number of steps must be non-negative")
    if inputs is None:
        return [DenseTensor.zeros(sys.input_shape) for _ in range(steps)]
    inputs = list(inputs)
    if len(inputs) < steps:
        raise ShapeError(f"{len(inputs)} inputs supplied for {steps} steps")
    for t, u in enumerate(inputs[:steps]):
        if u.shape != sys.input_shape:
            raise ShapeError(
                f"input at time step {t} has shape {u.shape}, expected {sys.input_shape}"
            )
    return inputs[:steps]


def simulate(
    sys: MltiSystem,
    x0: DenseTensor,
    inputs: Optional[Sequence[DenseTensor]],
    steps: int,
    method: str = "einstein",
) -> Trajectory:
    """Run the state recursion for ``steps`` steps.

    ``inputs=None`` means zero input.  ``method="tucker"`` propagates with
    Tucker products of the stored factor matrices instead of Einstein
    products of the dense operators.
    """
    _check_state(sys, x0)
    us = _inputs(sys, inputs, steps)
    if method == "einstein":
        def apply(op, x):
            return einstein_apply(getattr(sys, op), x)
    elif method == "tucker":
        if sys.tucker_factors is None:
            raise ValueError("tucker simulation needs a system built from factors")

        def apply(op, x):
            return tucker_product(x, getattr(sys.tucker_factors, op))
    else:
        raise ValueError(f"unknown simulation method {method!r}")

    states = [x0]
    for u in us:
        states.append(apply("A", states[-1]) + apply("B", u))
    outputs = [apply("C", x) for x in states]
    return Trajectory(tuple(states), tuple(outputs), tuple(us))


def solution_at(
    sys: MltiSystem, x0: DenseTensor, inputs: Optional[Sequence[DenseTensor]], k: int
) -> DenseTensor:
    """Closed-form state at time k from powers of A."""
    _check_state(sys, x0)
    us = _inputs(sys, inputs, k)
    x = einstein_apply(einstein_power(sys.A, k), x0)
    for j, u in enumerate(us):
        x = x + einstein_apply(einstein_power(sys.A, k - j - 1), einstein_apply(sys.B, u))
    return x


# ---------------------------------------------------------------------------
# stability


class Stability(str, enum.Enum):
    ASYMPTOTICALLY_STABLE = "asymptotically-stable"
    STABLE = "stable"
    UNSTABLE = "unstable"


@dataclass(frozen=True)
class MarginalCluster:
    eigenvalue: complex
    algebraic: int
    geometric: int


@dataclass(frozen=True)
class StabilityVerdict:
    classification: Stability
    spectrum: USpectrum
    marginal_detail: tuple[MarginalCluster, ...]

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(self.spectrum.eigenvalues)))


def classify_stability(A: PairedTensor, tol: Tolerance = DEFAULT_TOL) -> StabilityVerdict:
    spectrum = u_eigen(A)
    mags = np.abs(spectrum.eigenvalues)
    lo, hi = 1.0 - tol.stability, 1.0 + tol.stability
    marginal = []
    if np.all(mags < lo):
        cls = Stability.ASYMPTOTICALLY_STABLE
    elif np.any(mags > hi):
        cls = Stability.UNSTABLE
    else:
        cls = Stability.STABLE
        for c in eigenvalue_clusters(A, spectrum.eigenvalues, tol):
            if lo <= abs(c.eigenvalue) <= hi:
                marginal.append(MarginalCluster(c.eigenvalue, c.algebraic, c.geometric))
                if c.defective:
                    cls = Stability.UNSTABLE
    return StabilityVerdict(cls, spectrum, tuple(marginal))


# ---------------------------------------------------------------------------
# Gramians and Lyapunov equations


def _symmetrize(W: PairedTensor) -> PairedTensor:
    return PairedTensor((W.array + u_transpose(W).array) / 2)


def reach_gramian_finite(sys: MltiSystem, t0: int, t1: int) -> PairedTensor:
    """Sum of ``A^s * B * B^T * (A^T)^s`` for ``s = 0 .. t1-t0-1``."""
    if t1 <= t0:
        raise ValueError(f"horizon end {t1} must exceed start {t0}")
    term = sys.B
    W = None
    for s in range(t1 - t0):
        if s:
            term = einstein_product(sys.A, term)
        contrib = einstein_product(term, u_transpose(term))
        W = contrib if W is None else W + contrib
    return _symmetrize(W)


def obs_gramian_finite(sys: MltiSystem, t0: int, t1: int) -> PairedTensor:
    """Sum of ``(A^T)^s * C^T * C * A^s`` for ``s = 0 .. t1-t0-1``."""
    if t1 <= t0:
        raise ValueError(f"horizon end {t1} must exceed start {t0}")
    term = sys.C
    W = None
    for s in range(t1 - t0):
        if s:
            term = einstein_product(term, sys.A)
        contrib = einstein_product(u_transpose(term), term)
        W = contrib if W is None else W + contrib
    return _symmetrize(W)


def lyapunov_solve(
    A: PairedTensor, Q: PairedTensor, side: str = "reach", tol: Tolerance = DEFAULT_TOL
) -> PairedTensor:
    """Solve the tensor Stein equation by vectorizing the unfolded problem.

    ``side="reach"``: ``W - A * W * A^T = Q``.
    ``side="obs"``:   ``A^T * W * A - W = -Q``.
    """
    _require_square(A, "Lyapunov solve")
    if Q.pairs != A.pairs:
        raise ShapeError(f"Q has pairs {Q.pairs}, expected {A.pairs}")
    if side not in ("reach", "obs"):
        raise ValueError(f"side must be 'reach' or 'obs', got {side!r}")
    n = math.prod(A.row_shape)
    if n > LYAPUNOV_SIZE_LIMIT:
        raise SizeLimitError(n, LYAPUNOV_SIZE_LIMIT)
    radius = spectral_radius(A)
    if radius >= 1.0 - tol.stability:
        raise NoUniqueSolutionError(radius)
    M = phi(A) if side == "reach" else phi(A).T
    # vec(M W M^T) = (M kron M) vec(W) with column-major vec
    lhs = np.eye(n * n) - np.kron(M, M)
    w = np.linalg.solve(lhs, phi(Q).ravel(order="F"))
    W = phi_inverse(w.reshape((n, n), order="F"), A.pairs)
    if np.allclose(Q.array, u_transpose(Q).array, rtol=0, atol=tol.base * max(1.0, frobenius_norm(Q))):
        W = _symmetrize(W)
    return W


def lyapunov_residual(A: PairedTensor, Q: PairedTensor, W: PairedTensor, side: str = "reach") -> float:
    """Frobenius norm of the defining equation's residual."""
    if side == "reach":
        res = W - einstein_product(einstein_product(A, W), u_transpose(A)) - Q
    else:
        res = einstein_product(einstein_product(u_transpose(A), W), A) - W + Q
    return frobenius_norm(res)


def reach_gramian_infinite(sys: MltiSystem, tol: Tolerance = DEFAULT_TOL) -> PairedTensor:
    return lyapunov_solve(sys.A, einstein_product(sys.B, u_transpose(sys.B)), "reach", tol)


def obs_gramian_infinite(sys: MltiSystem, tol: Tolerance = DEFAULT_TOL) -> PairedTensor:
    return lyapunov_solve(sys.A, einstein_product(u_transpose(sys.C), sys.C), "obs", tol)


# ---------------------------------------------------------------------------
# reachability and observability


def reachability_tensor(sys: MltiSystem) -> PairedTensor:
    """Mode row block of ``B, A*B, ..., A^(|J|-1)*B`` with factors J."""
    blocks = [sys.B]
    for _ in range(sys.state_dim - 1):
        blocks.append(einstein_product(sys.A, blocks[-1]))
    return mode_row_block(blocks, sys.state_shape)


def observability_tensor(sys: MltiSystem) -> PairedTensor:
    """Mode column block of ``C, C*A, ..., C*A^(|J|-1)`` with factors J."""
    blocks = [sys.C]
    for _ in range(sys.state_dim - 1):
        blocks.append(einstein_product(blocks[-1], sys.A))
    return mode_col_block(blocks, sys.state_shape)


def is_reachable(sys: MltiSystem, tol: Tolerance = DEFAULT_TOL) -> bool:
    return rank_u(reachability_tensor(sys), tol) == sys.state_dim


def is_observable(sys: MltiSystem, tol: Tolerance = DEFAULT_TOL) -> bool:
    return rank_u(observability_tensor(sys), tol) == sys.state_dim


# ---------------------------------------------------------------------------
# steering


def min_energy_input(
    sys: MltiSystem,
    x0: DenseTensor,
    x1: DenseTensor,
    horizon: int,
    tol: Tolerance = DEFAULT_TOL,
) -> list[DenseTensor]:
    """Minimum-energy inputs steering x0 at time 0 to x1 at time ``horizon``.

    ``U_t = B^T * (A^T)^(T-t-1) * W^-1 * (x1 - A^T * x0)`` with W the
    reachability Gramian over ``[0, T]``.
    """
    _check_state(sys, x0)
    _check_state(sys, x1)
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    W = reach_gramian_finite(sys, 0, horizon)
    if not is_u_positive_definite(W, tol):
        raise UnreachableTargetError(
            horizon, rank_u(reachability_tensor(sys), tol), sys.state_dim
        )
    target = x1 - einstein_apply(einstein_power(sys.A, horizon), x0)
    g = einstein_apply(u_inverse(W, tol), target)
    At, Bt = u_transpose(sys.A), u_transpose(sys.B)
    inputs = [None] * horizon
    for t in range(horizon - 1, -1, -1):
        inputs[t] = einstein_apply(Bt, g)
        if t:
            g = einstein_apply(At, g)
    return inputs

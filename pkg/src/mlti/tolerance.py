from __future__ import annotations

from dataclasses import asdict, dataclass, replace

import numpy as np


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds shared by the rank, definiteness and inverse checks.

    All thresholds are relative to the magnitude of the operand they are
    applied to.

    Attributes
    ----------
    base:
        Relative threshold for rank decisions, U-positive definiteness and
        symmetry checks.
    stability:
        Width of the band around the unit circle treated as marginal.
    cluster:
        Relative gap below which eigenvalues are grouped into one cluster.
    cond_limit:
        Largest condition number accepted before an unfolding is declared
        singular.
    """

    base: float = 2.0**-40
    stability: float = 1e-9
    cluster: float = 1e-6
    cond_limit: float = 1.0 / float(np.finfo(np.float64).eps)

    def with_base(self, base: float) -> "Tolerance":
        if not base > 0:
            raise ValueError("tolerance must be positive")
        return replace(self, base=float(base))

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_TOL = Tolerance()

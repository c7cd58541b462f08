"""U-eigenvalues, tensor eigenvalue decomposition and characteristic polynomials."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cmp_to_key

import numpy as np

from .blocks import mode_row_block
from .errors import DecompositionUnavailableError, SolverError
from .tensor import (
    DenseTensor,
    PairedTensor,
    _rank,
    _require_square,
    einstein_product,
    phi,
    to_paired,
    u_diagonal,
    u_identity,
    u_inverse,
)
from .tolerance import DEFAULT_TOL, Tolerance


@dataclass(frozen=True)
class USpectrum:
    """U-eigenvalues with unit-norm eigentensors in matching order.

    Eigenvalues are ordered by descending magnitude, then descending real
    part, then descending imaginary part.
    """

    eigenvalues: np.ndarray
    eigentensors: tuple[DenseTensor, ...]

    def __len__(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class EigenCluster:
    eigenvalue: complex
    members: tuple[int, ...]
    algebraic: int
    geometric: int

    @property
    def defective(self) -> bool:
        return self.geometric < self.algebraic


def _ordering(eigs: np.ndarray) -> list[int]:
    scale = max(1.0, float(np.max(np.abs(eigs)))) if len(eigs) else 1.0
    eps = 1e-9 * scale

    def cmp(a: int, b: int) -> int:
        x, y = eigs[a], eigs[b]
        for u, v in ((abs(x), abs(y)), (x.real, y.real), (x.imag, y.imag)):
            if abs(u - v) > eps:
                return -1 if u > v else 1
        return 0

    return sorted(range(len(eigs)), key=cmp_to_key(cmp))


def _normalize(vec: np.ndarray) -> np.ndarray:
    vec = vec / np.linalg.norm(vec)
    nz = np.flatnonzero(np.abs(vec) > 1e-12)
    if nz.size:
        first = vec[nz[0]]
        vec = vec * (abs(first) / first)
    return vec


def _eig(M: np.ndarray):
    try:
        return np.linalg.eig(M)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"eigensolver failed on {M.shape} unfolding: {exc}") from exc


def u_eigen(A: PairedTensor) -> USpectrum:
    """U-eigenvalues and eigentensors: solutions of ``A * X = lambda X``."""
    _require_square(A, "U-eigenproblem")
    w, V = _eig(phi(A))
    w = w.astype(np.complex128)
    V = V.astype(np.complex128)
    order = _ordering(w)
    shape = A.row_shape
    tensors = tuple(DenseTensor.from_data(shape, _normalize(V[:, k])) for k in order)
    return USpectrum(eigenvalues=w[order], eigentensors=tensors)


def u_eigenvalues(A: PairedTensor) -> np.ndarray:
    _require_square(A, "U-eigenproblem")
    try:
        w = np.linalg.eigvals(phi(A)).astype(np.complex128)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"eigensolver failed: {exc}") from exc
    return w[_ordering(w)]


def spectral_radius(A: PairedTensor) -> float:
    return float(np.max(np.abs(u_eigenvalues(A))))


def eigenvalue_clusters(
    A: PairedTensor, eigenvalues=None, tol: Tolerance = DEFAULT_TOL
) -> list[EigenCluster]:
    """Group nearby U-eigenvalues and report their multiplicities.

    Eigenvalues closer than ``tol.cluster * max|lambda|`` are linked into one
    cluster.  The geometric multiplicity of a cluster is the nullity of
    ``A - mu I`` with ``mu`` the cluster mean.
    """
    if eigenvalues is None:
        eigenvalues = u_eigenvalues(A)
    eigs = np.asarray(eigenvalues, dtype=np.complex128)
    n = len(eigs)
    gap = tol.cluster * float(np.max(np.abs(eigs))) if n else 0.0
    labels = list(range(n))

    def find(a):
        while labels[a] != a:
            labels[a] = labels[labels[a]]
            a = labels[a]
        return a

    for a in range(n):
        for b in range(a + 1, n):
            if abs(eigs[a] - eigs[b]) <= gap:
                labels[find(a)] = find(b)
    groups: dict[int, list[int]] = {}
    for a in range(n):
        groups.setdefault(find(a), []).append(a)

    M = phi(A)
    eye = np.eye(M.shape[0])
    clusters = []
    for members in sorted(groups.values(), key=lambda m: m[0]):
        mu = complex(np.mean(eigs[members]))
        if len(members) == 1:
            geometric = 1
        else:
            geometric = n - _rank(M - mu * eye, tol)
            geometric = min(max(geometric, 1), len(members))
        clusters.append(EigenCluster(mu, tuple(members), len(members), geometric))
    return clusters


@dataclass(frozen=True)
class TensorEVD:
    """``A = V * D * V_inv`` with eigentensors as the blocks of V.

    ``real_representable`` is True when every eigenvalue is real, in which
    case V could be chosen real.
    """

    V: PairedTensor
    D: PairedTensor
    V_inv: PairedTensor
    real_representable: bool


def tevd(A: PairedTensor, tol: Tolerance = DEFAULT_TOL) -> TensorEVD:
    spectrum = u_eigen(A)
    defective = [
        c for c in eigenvalue_clusters(A, spectrum.eigenvalues, tol) if c.defective
    ]
    if defective:
        raise DecompositionUnavailableError(
            (c.eigenvalue, c.algebraic, c.geometric) for c in defective
        )
    shape = A.row_shape
    V = mode_row_block([to_paired(x) for x in spectrum.eigentensors], shape)
    D = u_diagonal(DenseTensor.from_data(shape, spectrum.eigenvalues))
    V_inv = u_inverse(V, tol)
    scale = max(1.0, float(np.max(np.abs(spectrum.eigenvalues))))
    real = bool(np.all(np.abs(spectrum.eigenvalues.imag) <= 1e-12 * scale))
    return TensorEVD(V, D, V_inv, real)


def characteristic_polynomial(A: PairedTensor) -> np.ndarray:
    """Monic coefficients (highest degree first) of ``det_U(lambda I - A)``.

    Built from the U-eigenvalues, adequate for unfoldings up to 64 x 64.
    """
    coeffs = np.poly(u_eigenvalues(A))
    if not A.is_complex:
        coeffs = coeffs.real
    return coeffs


def polynomial_of(A: PairedTensor, coeffs) -> PairedTensor:
    """Evaluate a polynomial (highest degree first) at A by Horner's rule."""
    _require_square(A, "polynomial evaluation")
    eye = u_identity(A.row_shape)
    coeffs = list(coeffs)
    out = eye * coeffs[0]
    for c in coeffs[1:]:
        out = einstein_product(out, A) + eye * c
    return out


def cayley_hamilton_residual(A: PairedTensor) -> float:
    """Frobenius norm of ``p(A)`` for the characteristic polynomial p."""
    res = polynomial_of(A, characteristic_polynomial(A))
    return float(np.linalg.norm(res.array.ravel()))


def cayley_hamilton_bound(A: PairedTensor, rel: float = 1e-8) -> float:
    norm = float(np.linalg.norm(A.array.ravel()))
    return rel * (1.0 + norm) ** math.prod(A.row_shape)

"""Dense tensors, even-order paired tensors and the Einstein-product algebra.

Layout convention
-----------------
Every tensor stores its entries in *ivec order*: the first index varies
fastest, so the flat data of a tensor is ``array.ravel(order="F")``.  A paired
tensor with pairs ``(J_1, I_1), ..., (J_N, I_N)`` is an order-2N array whose
axes are interleaved as ``(j_1, i_1, ..., j_N, i_N)``.

Multi-indices passed to :func:`ivec` and used in file formats are 1-based.
Numpy arrays exposed through ``.array`` are indexed 0-based as usual, so the
entry ``A[j_1, i_1, j_2, i_2]`` (1-based) is ``A.array[j_1-1, i_1-1, j_2-1, i_2-1]``.

Complex tensors share the same classes; the dtype is either ``float64`` or
``complex128``.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from typing import Optional, Union

import numpy as np

from .errors import IndexBoundsError, ShapeError, SingularTensorError
from .tolerance import DEFAULT_TOL, Tolerance

Scalar = Union[int, float, complex]


def _as_array(values, copy: bool = True) -> np.ndarray:
    arr = np.asarray(values)
    dtype = np.complex128 if np.iscomplexobj(arr) else np.float64
    # one canonical memory layout, so BLAS sees the same strides (and sums in
    # the same order) however the tensor was built
    arr = np.array(arr, dtype=dtype, copy=copy, order="C")
    arr.flags.writeable = False
    return arr


def _check_extents(shape: Sequence[int]) -> tuple[int, ...]:
    shape = tuple(int(s) for s in shape)
    for n, extent in enumerate(shape, start=1):
        if extent < 1:
            raise ShapeError(f"extent {extent} at mode {n} is not positive")
    return shape


class DenseTensor:
    """An order-N real or complex tensor.

    ``DenseTensor(array)`` wraps an N-dimensional array indexed as
    ``array[j_1-1, ..., j_N-1]``.  Use :meth:`from_data` to build one from a
    shape and flat data in ivec order.  Instances are immutable.
    """

    __slots__ = ("array",)

    def __init__(self, array):
        arr = _as_array(array)
        _check_extents(arr.shape)
        self.array = arr

    @classmethod
    def from_data(cls, shape: Sequence[int], data) -> "DenseTensor":
        shape = _check_extents(shape)
        flat = np.asarray(data).ravel()
        if flat.size != math.prod(shape):
            raise ShapeError(
                f"data length {flat.size} does not match shape {shape} "
                f"(expected {math.prod(shape)})"
            )
        return cls(flat.reshape(shape, order="F"))

    @classmethod
    def zeros(cls, shape: Sequence[int]) -> "DenseTensor":
        return cls(np.zeros(_check_extents(shape)))

    @property
    def shape(self) -> tuple[int, ...]:
        return self.array.shape

    @property
    def order(self) -> int:
        return self.array.ndim

    @property
    def size(self) -> int:
        return self.array.size

    @property
    def data(self) -> np.ndarray:
        """Flat entries in ivec order."""
        return self.array.ravel(order="F")

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.array)

    def __add__(self, other: "DenseTensor") -> "DenseTensor":
        _require_same_shape(self.shape, other.shape)
        return DenseTensor(self.array + other.array)

    def __sub__(self, other: "DenseTensor") -> "DenseTensor":
        _require_same_shape(self.shape, other.shape)
        return DenseTensor(self.array - other.array)

    def __neg__(self) -> "DenseTensor":
        return DenseTensor(-self.array)

    def __mul__(self, scalar: Scalar) -> "DenseTensor":
        return DenseTensor(self.array * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Scalar) -> "DenseTensor":
        return DenseTensor(self.array / scalar)

    def __repr__(self) -> str:
        kind = "complex" if self.is_complex else "real"
        return f"DenseTensor(shape={self.shape}, {kind})"


class PairedTensor:
    """An even-order paired tensor acting as a multilinear operator.

    The wrapped array has interleaved shape ``(J_1, I_1, ..., J_N, I_N)``
    where ``(J_1..J_N)`` is the row shape and ``(I_1..I_N)`` the column
    shape.  ``factors`` optionally records the matrices whose outer product
    the tensor is; it enables the factored power path and is otherwise
    ignored.
    """

    __slots__ = ("array", "factors")

    def __init__(self, array, factors: Optional[Sequence[np.ndarray]] = None):
        arr = _as_array(array)
        if arr.ndim == 0 or arr.ndim % 2:
            raise ShapeError(f"paired tensor needs an even, positive order; got {arr.ndim}")
        _check_extents(arr.shape)
        self.array = arr
        if factors is not None:
            factors = tuple(_as_array(f) for f in factors)
            if tuple(f.shape for f in factors) != self.pairs:
                raise ShapeError("factor shapes do not match the tensor pairs")
        self.factors = factors

    @classmethod
    def from_data(cls, pairs: Sequence[Sequence[int]], data) -> "PairedTensor":
        pairs = _check_pairs(pairs)
        shape = tuple(e for p in pairs for e in p)
        flat = np.asarray(data).ravel()
        if flat.size != math.prod(shape):
            raise ShapeError(
                f"data length {flat.size} does not match pairs {pairs} "
                f"(expected {math.prod(shape)})"
            )
        return cls(flat.reshape(shape, order="F"))

    @classmethod
    def from_factors(cls, matrices: Sequence) -> "PairedTensor":
        """Outer product ``M_1 o M_2 o ... o M_N`` of matrices, keeping the factors."""
        mats = [np.atleast_2d(np.asarray(m)) for m in matrices]
        if not mats:
            raise ShapeError("at least one factor is required")
        for n, m in enumerate(mats, start=1):
            if m.ndim != 2:
                raise ShapeError(f"factor {n} is not a matrix")
        arr = mats[0]
        for m in mats[1:]:
            arr = np.multiply.outer(arr, m)
        return cls(arr, factors=mats)

    @classmethod
    def zeros(cls, pairs: Sequence[Sequence[int]]) -> "PairedTensor":
        pairs = _check_pairs(pairs)
        return cls(np.zeros(tuple(e for p in pairs for e in p)))

    @property
    def npairs(self) -> int:
        return self.array.ndim // 2

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        s = self.array.shape
        return tuple((s[2 * n], s[2 * n + 1]) for n in range(self.npairs))

    @property
    def row_shape(self) -> tuple[int, ...]:
        return self.array.shape[0::2]

    @property
    def col_shape(self) -> tuple[int, ...]:
        return self.array.shape[1::2]

    @property
    def is_square(self) -> bool:
        return self.row_shape == self.col_shape

    @property
    def data(self) -> np.ndarray:
        return self.array.ravel(order="F")

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.array)

    @property
    def T(self) -> "PairedTensor":
        return u_transpose(self)

    def __matmul__(self, other):
        if isinstance(other, PairedTensor):
            return einstein_product(self, other)
        if isinstance(other, DenseTensor):
            return einstein_apply(self, other)
        return NotImplemented

    def __add__(self, other: "PairedTensor") -> "PairedTensor":
        _require_same_shape(self.array.shape, other.array.shape)
        return PairedTensor(self.array + other.array)

    def __sub__(self, other: "PairedTensor") -> "PairedTensor":
        _require_same_shape(self.array.shape, other.array.shape)
        return PairedTensor(self.array - other.array)

    def __neg__(self) -> "PairedTensor":
        return PairedTensor(-self.array)

    def __mul__(self, scalar: Scalar) -> "PairedTensor":
        return PairedTensor(self.array * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Scalar) -> "PairedTensor":
        return PairedTensor(self.array / scalar)

    def __repr__(self) -> str:
        kind = "complex" if self.is_complex else "real"
        return f"PairedTensor(pairs={self.pairs}, {kind})"


def _check_pairs(pairs) -> tuple[tuple[int, int], ...]:
    out = []
    for n, p in enumerate(pairs, start=1):
        if len(p) != 2:
            raise ShapeError(f"pair {n} must have two extents")
        out.append(_check_extents(p))
    if not out:
        raise ShapeError("a paired tensor needs at least one pair")
    return tuple(out)


def _require_same_shape(a, b) -> None:
    if tuple(a) != tuple(b):
        raise ShapeError(f"shape mismatch: {tuple(a)} vs {tuple(b)}")


def _first_mismatch(a: Sequence[int], b: Sequence[int]) -> str:
    if len(a) != len(b):
        return f"orders differ ({len(a)} vs {len(b)})"
    for n, (x, y) in enumerate(zip(a, b), start=1):
        if x != y:
            return f"pair {n}: {x} vs {y}"
    return "none"


# ---------------------------------------------------------------------------
# index arithmetic and unfoldings


def ivec(indices: Sequence[int], shape: Sequence[int]) -> int:
    """Linear position (1-based) of a 1-based multi-index, first index fastest."""
    if len(indices) != len(shape):
        raise ShapeError(
            f"multi-index has {len(indices)} entries but shape has {len(shape)} modes"
        )
    pos = 1
    stride = 1
    for mode, (j, extent) in enumerate(zip(indices, shape), start=1):
        j = int(j)
        if not 1 <= j <= extent:
            raise IndexBoundsError(mode, j, int(extent))
        pos += (j - 1) * stride
        stride *= int(extent)
    return pos


def _check_permutation(perm: Sequence[int], order: int) -> list[int]:
    perm = [int(s) for s in perm]
    if sorted(perm) != list(range(1, order + 1)):
        raise ShapeError(f"{tuple(perm)} is not a permutation of 1..{order}")
    return perm


def s_transpose(X: DenseTensor, perm: Sequence[int]) -> DenseTensor:
    """Permute modes: mode k of the result is mode ``perm[k]`` of X (1-based)."""
    perm = _check_permutation(perm, X.order)
    return DenseTensor(np.transpose(X.array, [s - 1 for s in perm]))


def _unfold(arr: np.ndarray, perm0: Sequence[int], z: int) -> np.ndarray:
    moved = np.transpose(arr, perm0)
    rows = math.prod(moved.shape[:z])
    cols = math.prod(moved.shape[z:])
    return moved.reshape((rows, cols), order="F")


def general_unfold(X: DenseTensor, perm: Sequence[int], z: int) -> np.ndarray:
    """Unfold X into a matrix with rows over modes ``perm[:z]`` and columns over the rest."""
    perm = _check_permutation(perm, X.order)
    if not 1 <= z < X.order:
        raise ShapeError(f"split point {z} must satisfy 1 <= z < {X.order}")
    return _unfold(X.array, [s - 1 for s in perm], z)


def n_mode_matricization(X: DenseTensor, n: int) -> np.ndarray:
    N = X.order
    if not 1 <= n <= N:
        raise ShapeError(f"mode {n} out of range 1..{N}")
    perm = [n] + [k for k in range(1, N + 1) if k != n]
    return general_unfold(X, perm, 1)


def phi(A: PairedTensor) -> np.ndarray:
    """Unfold a paired tensor into its ``prod(J) x prod(I)`` matrix.

    Entry ``A[j_1, i_1, ..., j_N, i_N]`` lands at row ``ivec(j, J)`` and column
    ``ivec(i, I)``.
    """
    N = A.npairs
    perm0 = list(range(0, 2 * N, 2)) + list(range(1, 2 * N, 2))
    return _unfold(A.array, perm0, N)


def phi_inverse(M, pairs: Sequence[Sequence[int]]) -> PairedTensor:
    pairs = _check_pairs(pairs)
    M = np.asarray(M)
    rows = math.prod(p[0] for p in pairs)
    cols = math.prod(p[1] for p in pairs)
    if M.shape != (rows, cols):
        raise ShapeError(
            f"matrix of shape {M.shape} cannot fold to pairs {pairs}; expected {(rows, cols)}"
        )
    N = len(pairs)
    split = M.reshape(
        tuple(p[0] for p in pairs) + tuple(p[1] for p in pairs), order="F"
    )
    interleave = [k for n in range(N) for k in (n, N + n)]
    return PairedTensor(np.transpose(split, interleave))


def to_paired(X: DenseTensor) -> PairedTensor:
    """View an order-N tensor as a paired tensor with unit column extents."""
    shape = tuple(e for j in X.shape for e in (j, 1))
    return PairedTensor(X.array.reshape(shape))


def from_paired(A: PairedTensor) -> DenseTensor:
    if any(i != 1 for i in A.col_shape):
        raise ShapeError(f"column shape {A.col_shape} is not all ones")
    return DenseTensor(A.array.reshape(A.row_shape))


# ---------------------------------------------------------------------------
# products


def outer_product(X: DenseTensor, Y: DenseTensor) -> DenseTensor:
    return DenseTensor(np.multiply.outer(X.array, Y.array))


def inner_product(X, Y) -> float:
    """Sum of elementwise products of two same-shape tensors (no conjugation)."""
    _require_same_shape(X.array.shape, Y.array.shape)
    return np.sum(X.array * Y.array).item()


def frobenius_norm(X) -> float:
    return float(np.linalg.norm(X.array.ravel()))


def _as_matrix(A) -> np.ndarray:
    if isinstance(A, PairedTensor):
        if A.npairs != 1:
            raise ShapeError("matrix operand must be an order-2 paired tensor")
        return A.array
    mat = np.asarray(A)
    if mat.ndim != 2:
        raise ShapeError(f"matrix operand must be 2-D, got {mat.ndim}-D")
    return mat


def mode_n_product(X: DenseTensor, A, n: int) -> DenseTensor:
    """Contract mode ``n`` (1-based) of X with the columns of matrix A."""
    mat = _as_matrix(A)
    if not 1 <= n <= X.order:
        raise ShapeError(f"mode {n} out of range 1..{X.order}")
    if mat.shape[1] != X.shape[n - 1]:
        raise ShapeError(
            f"mode {n}: matrix has {mat.shape[1]} columns but tensor extent is {X.shape[n - 1]}"
        )
    out = np.tensordot(mat, X.array, axes=(1, n - 1))
    return DenseTensor(np.moveaxis(out, 0, n - 1))


def tucker_product(X: DenseTensor, factors: Sequence) -> DenseTensor:
    if len(factors) != X.order:
        raise ShapeError(f"{len(factors)} factors given for an order-{X.order} tensor")
    out = X
    for n, mat in enumerate(factors, start=1):
        out = mode_n_product(out, mat, n)
    return out


def einstein_product(A: PairedTensor, B: PairedTensor) -> PairedTensor:
    """Contract the column indices of A with the row indices of B."""
    if A.col_shape != B.row_shape:
        raise ShapeError(
            "Einstein product needs col-shape(A) == row-shape(B); first mismatch at "
            + _first_mismatch(A.col_shape, B.row_shape)
        )
    N = A.npairs
    out = np.tensordot(
        A.array, B.array, axes=(list(range(1, 2 * N, 2)), list(range(0, 2 * N, 2)))
    )
    interleave = [k for n in range(N) for k in (n, N + n)]
    return PairedTensor(np.transpose(out, interleave))


def einstein_apply(A: PairedTensor, X: DenseTensor) -> DenseTensor:
    """Apply a paired operator to a tensor whose shape is A's column shape."""
    if A.col_shape != X.shape:
        raise ShapeError(
            f"operator column shape {A.col_shape} does not match tensor shape {X.shape}; "
            "first mismatch at " + _first_mismatch(A.col_shape, X.shape)
        )
    N = A.npairs
    out = np.tensordot(A.array, X.array, axes=(list(range(1, 2 * N, 2)), list(range(N))))
    return DenseTensor(out)


def u_transpose(A: PairedTensor) -> PairedTensor:
    N = A.npairs
    swap = [k for n in range(N) for k in (2 * n + 1, 2 * n)]
    factors = None if A.factors is None else [f.T for f in A.factors]
    return PairedTensor(np.transpose(A.array, swap), factors=factors)


# ---------------------------------------------------------------------------
# special tensors


def u_identity(row_shape: Sequence[int]) -> PairedTensor:
    row_shape = _check_extents(row_shape)
    if not row_shape:
        raise ShapeError("U-identity needs at least one mode")
    return PairedTensor.from_factors([np.eye(j) for j in row_shape])


def u_diagonal(values) -> PairedTensor:
    """U-diagonal tensor whose diagonal entry at ``(j_1, j_1, ..., j_N, j_N)`` is ``values[j]``.

    ``values`` is a :class:`DenseTensor` (or array) of the row shape.
    """
    if not isinstance(values, DenseTensor):
        values = DenseTensor(values)
    if values.order == 0:
        raise ShapeError("U-diagonal needs at least one mode")
    pairs = [(j, j) for j in values.shape]
    return phi_inverse(np.diag(values.data), pairs)


def _require_square(A: PairedTensor, what: str) -> None:
    if not A.is_square:
        raise ShapeError(
            f"{what} needs square pairs; got row shape {A.row_shape} and column shape {A.col_shape}"
        )


def is_weakly_symmetric(A: PairedTensor, tol: Tolerance = DEFAULT_TOL) -> bool:
    if not A.is_square:
        return False
    diff = np.linalg.norm((A.array - u_transpose(A).array).ravel())
    return bool(diff <= tol.base * max(1.0, frobenius_norm(A)))


def is_u_orthogonal(U: PairedTensor, tol: Tolerance = DEFAULT_TOL) -> bool:
    _require_square(U, "U-orthogonality")
    M = phi(U)
    eye = np.eye(M.shape[0])
    bound = tol.base * M.shape[0]
    return bool(
        np.linalg.norm(M.conj().T @ M - eye) <= bound
        and np.linalg.norm(M @ M.conj().T - eye) <= bound
    )


def u_inverse(A: PairedTensor, tol: Tolerance = DEFAULT_TOL) -> PairedTensor:
    """U-inverse via dense LU on the unfolding.

    Raises :class:`SingularTensorError` when the condition estimate exceeds
    ``tol.cond_limit``.
    """
    _require_square(A, "U-inverse")
    M = phi(A)
    if not np.all(np.isfinite(M)):
        raise SingularTensorError(float("inf"))
    cond = float(np.linalg.cond(M))
    if not np.isfinite(cond) or cond > tol.cond_limit:
        raise SingularTensorError(cond)
    inv = np.linalg.solve(M, np.eye(M.shape[0], dtype=M.dtype))
    return phi_inverse(inv, A.pairs)


def u_det(A: PairedTensor):
    _require_square(A, "unfolding determinant")
    return np.linalg.det(phi(A)).item()


def _rank(M: np.ndarray, tol: Tolerance) -> int:
    if M.size == 0:
        return 0
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.count_nonzero(sv > tol.base * sv[0] * max(M.shape)))


def rank_u(A: PairedTensor, tol: Tolerance = DEFAULT_TOL) -> int:
    """Unfolding rank: dimension of the range of A."""
    return _rank(phi(A), tol)


def nullity_u(A: PairedTensor, tol: Tolerance = DEFAULT_TOL) -> int:
    return math.prod(A.col_shape) - rank_u(A, tol)


def symmetric_part_eigenvalues(A: PairedTensor) -> np.ndarray:
    """Ascending eigenvalues of the symmetric part of ``phi(A)``."""
    _require_square(A, "definiteness")
    M = phi(A)
    return np.linalg.eigvalsh((M + M.conj().T) / 2)


def is_u_positive_definite(A: PairedTensor, tol: Tolerance = DEFAULT_TOL) -> bool:
    # the quadratic form only sees the symmetric part
    lam_min = symmetric_part_eigenvalues(A)[0]
    scale = max(1.0, float(np.linalg.norm(phi(A), 2)))
    return bool(lam_min > tol.base * scale)


def einstein_power(A: PairedTensor, k: int) -> PairedTensor:
    """``A * A * ... * A`` (k times); ``k == 0`` gives the U-identity.

    When A carries its Tucker factors the power is taken factor by factor.
    """
    _require_square(A, "Einstein power")
    k = int(k)
    if k < 0:
        raise ValueError("power must be non-negative")
    if A.factors is not None:
        return PairedTensor.from_factors([np.linalg.matrix_power(f, k) for f in A.factors])
    result = u_identity(A.row_shape) if k == 0 else None
    base = A
    while k:
        if k & 1:
            result = base if result is None else einstein_product(result, base)
        k >>= 1
        if k:
            base = einstein_product(base, base)
    return result

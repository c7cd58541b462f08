"""Block tensors built from same-shape paired tensors.

Row blocks concatenate along column extents and column blocks along row
extents.  In a generalized mode row block with factors ``(K_1, ..., K_N)``
block number ``k`` (1-based) sits at block multi-index ``kk`` with
``ivec(kk, K) == k``; its entry ``(j_n, i_n)`` moves to
``(j_n, i_n + I_n * (kk_n - 1))`` at every mode.  This is what the staged
construction (group runs of ``K_1`` blocks along mode 1, then runs of
``K_2`` of those along mode 2, and so on) produces.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .tensor import PairedTensor, u_transpose


def _check_mode(n: int, N: int) -> None:
    if not 1 <= n <= N:
        raise ShapeError(f"mode {n} out of range 1..{N}")


def n_mode_row_block(A: PairedTensor, B: PairedTensor, n: int) -> PairedTensor:
    """Concatenate B after A along the column extent of mode ``n``."""
    if A.pairs != B.pairs:
        raise ShapeError(f"row block needs equal pairs; got {A.pairs} and {B.pairs}")
    _check_mode(n, A.npairs)
    return PairedTensor(np.concatenate([A.array, B.array], axis=2 * n - 1))


def n_mode_col_block(A: PairedTensor, B: PairedTensor, n: int) -> PairedTensor:
    """Stack B below A along the row extent of mode ``n``."""
    return u_transpose(n_mode_row_block(u_transpose(A), u_transpose(B), n))


def block_permutation(n: int, pairs: Sequence[Sequence[int]], block_count: int = 2) -> np.ndarray:
    """Permutation matrix P with ``phi(row block) == [phi(X_1) ... phi(X_m)] @ P``.

    The row block concatenates ``block_count`` tensors of the given pairs
    along mode ``n``.
    """
    cols = [int(p[1]) for p in pairs]
    _check_mode(n, len(cols))
    if block_count < 1:
        raise ValueError("block_count must be positive")
    ncol = math.prod(cols)
    total = ncol * block_count
    P = np.zeros((total, total))
    grown = list(cols)
    grown[n - 1] *= block_count
    # columns of the concatenated unfolding, block-major then ivec over I
    multi = np.unravel_index(np.arange(ncol), cols, order="F")
    for b in range(block_count):
        idx = list(multi)
        idx[n - 1] = idx[n - 1] + cols[n - 1] * b
        target = np.ravel_multi_index(idx, grown, order="F")
        P[b * ncol + np.arange(ncol), target] = 1.0
    return P


@dataclass(frozen=True)
class BlockSpec:
    blocks: tuple[PairedTensor, ...]
    factors: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(self.blocks)
        factors = tuple(int(k) for k in self.factors)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "factors", factors)
        if not blocks:
            raise ShapeError("at least one block is required")
        pairs = blocks[0].pairs
        for k, blk in enumerate(blocks[1:], start=2):
            if blk.pairs != pairs:
                raise ShapeError(f"block {k} has pairs {blk.pairs}, expected {pairs}")
        if len(factors) != len(pairs):
            raise ShapeError(f"{len(factors)} factors given for {len(pairs)} modes")
        if any(k < 1 for k in factors):
            raise ShapeError("block factors must be positive")
        if math.prod(factors) != len(blocks):
            raise ShapeError(
                f"factors {factors} need {math.prod(factors)} blocks, got {len(blocks)}"
            )


def mode_row_block(blocks: Sequence[PairedTensor], factors: Sequence[int]) -> PairedTensor:
    """Generalized mode row block tensor of ``prod(factors)`` blocks."""
    spec = BlockSpec(tuple(blocks), tuple(factors))
    N = len(spec.factors)
    stacked = np.stack([b.array for b in spec.blocks], axis=-1)
    # split the block axis into (K_1, ..., K_N), first fastest
    stacked = stacked.reshape(stacked.shape[:-1] + spec.factors, order="F")
    perm = []
    for n in range(N):
        perm += [2 * n, 2 * n + 1, 2 * N + n]
    moved = np.transpose(stacked, perm)
    shape = []
    for (j, i), k in zip(spec.blocks[0].pairs, spec.factors):
        shape += [j, i * k]
    return PairedTensor(moved.reshape(shape, order="F"))


def mode_col_block(blocks: Sequence[PairedTensor], factors: Sequence[int]) -> PairedTensor:
    return u_transpose(mode_row_block([u_transpose(b) for b in blocks], factors))

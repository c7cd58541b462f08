"""Brute-force reference implementations used as test oracles.

Everything here loops over explicit 1-based multi-indices and uses only the
index formula, never the library's array reshapes.
"""

import itertools
import math

import numpy as np

A1 = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.2, 0.5, 0.8]])
A2 = np.array([[0.0, 1.0], [0.5, 0.0]])
B1 = np.array([[0.0], [0.0], [1.0]])
B2 = np.array([[0.0], [1.0]])
C1 = np.array([[1.0, 0.0, 0.0]])
C2 = np.array([[1.0, 0.0]])


def ivec_formula(idx, shape):
    return idx[0] + sum((idx[k] - 1) * math.prod(shape[:k]) for k in range(1, len(shape)))


def multi_indices(shape):
    """All 1-based multi-indices of a shape."""
    return itertools.product(*[range(1, e + 1) for e in shape])


def phi_loop(arr):
    """Unfold an interleaved paired array entry by entry."""
    J, I = arr.shape[0::2], arr.shape[1::2]
    M = np.zeros((math.prod(J), math.prod(I)), dtype=arr.dtype)
    for j in multi_indices(J):
        for i in multi_indices(I):
            entry = arr[tuple(x - 1 for pair in zip(j, i) for x in pair)]
            M[ivec_formula(j, J) - 1, ivec_formula(i, I) - 1] = entry
    return M


def einstein_loop(a, b):
    J, K, I = a.shape[0::2], a.shape[1::2], b.shape[1::2]
    out = np.zeros(tuple(e for pair in zip(J, I) for e in pair))
    for j in multi_indices(J):
        for i in multi_indices(I):
            s = 0.0
            for k in multi_indices(K):
                ai = tuple(x - 1 for pair in zip(j, k) for x in pair)
                bi = tuple(x - 1 for pair in zip(k, i) for x in pair)
                s += a[ai] * b[bi]
            out[tuple(x - 1 for pair in zip(j, i) for x in pair)] = s
    return out


def flat_loop(arr):
    """Flat ivec-ordered data of an array, built entry by entry."""
    out = np.zeros(arr.size, dtype=arr.dtype)
    for idx in multi_indices(arr.shape):
        out[ivec_formula(idx, arr.shape) - 1] = arr[tuple(x - 1 for x in idx)]
    return out


def random_paired_array(rng, pairs):
    return rng.standard_normal(tuple(e for p in pairs for e in p))


def random_pairs(rng, N, max_extent=3):
    return [tuple(int(x) for x in rng.integers(1, max_extent + 1, size=2)) for _ in range(N)]


def krylov(A, B, n):
    blocks = [B]
    for _ in range(n - 1):
        blocks.append(A @ blocks[-1])
    return np.hstack(blocks)

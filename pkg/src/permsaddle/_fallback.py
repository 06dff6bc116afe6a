"""Pure NumPy kernels, used when the compiled extension is unavailable.

Both functions return exactly the arrays the Cython kernels return: the same
permutations, visited in the same order, with each statistic accumulated
left to right over positions.
"""

from __future__ import annotations

import numpy as np

from ._rng import bounded_array

NAME = "python"


def mc_statistics(a: np.ndarray, b: np.ndarray, key: int, start: int, count: int) -> np.ndarray:
    """Statistics ``sum_k a[k] * b[perm[k]]`` for replicates ``start .. start+count-1``."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    n = a.shape[0]
    perms = np.tile(np.arange(n, dtype=np.int64), (count, 1))
    rows = np.arange(count)
    base = (np.arange(start, start + count, dtype=np.uint64)) * np.uint64(n - 1)
    for step, i in enumerate(range(n - 1, 0, -1)):
        j = bounded_array(key, base + np.uint64(step), i + 1)
        held = perms[:, i].copy()
        perms[:, i] = perms[rows, j]
        perms[rows, j] = held
    out = np.zeros(count)
    for k in range(n):
        out += a[k] * b[perms[:, k]]
    return out


def _lex_permutations(n: int) -> np.ndarray:
    perms = np.zeros((1, 0), dtype=np.int8)
    for k in range(1, n + 1):
        # prepend each leading value, relabelling the tail to the remaining ones
        blocks = []
        for lead in range(k):
            tail = perms + (perms >= lead)
            blocks.append(np.hstack([np.full((tail.shape[0], 1), lead, dtype=np.int8), tail]))
        perms = np.vstack(blocks).astype(np.int8)
    return perms


def all_statistics(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Statistic for every permutation of ``range(n)``, in lexicographic order."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    n = a.shape[0]
    perms = _lex_permutations(n)
    out = np.zeros(perms.shape[0])
    for k in range(n):
        out += a[k] * b[perms[:, k]]
    return out

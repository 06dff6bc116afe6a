"""Independent oracles used by the test-suite.

Nothing here imports the package's numerical code, so the checks do not
share a code path with what they verify.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

NAYAK_X = [1641, 5556, 5421, 3168, 1534, 6367, 9460, 6679, 6142, 5995, 3953, 6922, 4210, 5161, 4732]
NAYAK_Y = [850, 1607, 2225, 3223, 3379, 3832, 3871, 4142, 4300, 4789, 6310, 6311, 6378, 6449, 6949]


def brute_force_statistics(a, b) -> list[float]:
    """``sum a[i] b[p[i]]`` for every permutation, with plain Python sums."""
    n = len(a)
    return [sum(a[i] * b[p[i]] for i in range(n)) for p in itertools.permutations(range(n))]


def exact_tail_fraction(a, b, v0) -> tuple[Fraction, Fraction]:
    """``(Pr(V >= v0), Pr(V == v0))`` as fractions, integer scores only."""
    stats = brute_force_statistics([int(x) for x in a], [int(x) for x in b])
    total = len(stats)
    ge = sum(1 for s in stats if s >= v0)
    eq = sum(1 for s in stats if s == v0)
    return Fraction(ge, total), Fraction(eq, total)


def spearman_vprime_counts(n: int) -> np.ndarray:
    """Exact null counts of ``V' = sum i R_i`` by dynamic programming over subsets.

    ``counts[v]`` is the number of permutations with ``V' = v``.  Position
    ``k`` (1-based) is assigned rank ``r`` from the unused set.
    """
    vmax = sum(i * i for i in range(1, n + 1))
    layer = {0: np.zeros(vmax + 1, dtype=np.int64)}
    layer[0][0] = 1
    for k in range(1, n + 1):
        nxt: dict[int, np.ndarray] = {}
        for mask, arr in layer.items():
            for r in range(n):
                if mask >> r & 1:
                    continue
                shift = k * (r + 1)
                moved = np.zeros_like(arr)
                moved[shift:] = arr[: vmax + 1 - shift]
                m2 = mask | (1 << r)
                if m2 in nxt:
                    nxt[m2] += moved
                else:
                    nxt[m2] = moved
        layer = nxt
    return layer[(1 << n) - 1]


def erf_series(x: float, terms: int = 200) -> float:
    """Maclaurin series of erf; accurate to ~1e-15 for |x| <= 3."""
    total = 0.0
    term = x
    for k in range(terms):
        total += term / (2 * k + 1)
        term *= -x * x / (k + 1)
    return 2.0 / math.sqrt(math.pi) * total


def normal_quantile_bisection(p: float) -> float:
    lo, hi = -8.0, 8.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if 0.5 * (1.0 + erf_series(mid / math.sqrt(2.0))) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def central_gradient(f, z: np.ndarray, h: float) -> np.ndarray:
    g = np.zeros_like(z)
    for k in range(z.size):
        e = np.zeros_like(z)
        e[k] = h
        g[k] = (f(z + e) - f(z - e)) / (2 * h)
    return g


def central_jacobian(f, z: np.ndarray, h: float) -> np.ndarray:
    cols = []
    for k in range(z.size):
        e = np.zeros_like(z)
        e[k] = h
        cols.append((f(z + e) - f(z - e)) / (2 * h))
    return np.column_stack(cols)


def brute_cgf(r: np.ndarray, z: np.ndarray) -> float:
    """``K(s, t)`` straight from the product formula with uniform weights."""
    n = r.shape[0]
    s, t = z[:-1], z[-1]
    total = 0.0
    for i in range(n):
        m = sum(math.exp(s[j] + r[i, j] * t) for j in range(n - 1)) + 1.0
        total += math.log(m / n)
    return total

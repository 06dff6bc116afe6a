"""Ranks, the linear rank statistic and its classical equivalents.

The statistic is ``V = sum_i a[i] * b[R_i]``: ``a`` are the regression
scores attached to the positions of the x-ordered sample and ``b`` the
scores of the y-ranks.  ``a = b = (1..N)`` gives ``V' = sum i R_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateSpecError, DimensionError, InvalidSizeError, InvalidValueError, TieError
from .scores import ScoreVector, custom_scores


@dataclass(frozen=True, eq=False)
class PairedSample:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        x = np.array(self.x, dtype=np.float64)
        y = np.array(self.y, dtype=np.float64)
        if x.ndim != 1 or y.ndim != 1:
            raise DimensionError("x and y must be one-dimensional")
        if x.shape != y.shape:
            raise DimensionError(f"x has {x.shape[0]} values but y has {y.shape[0]}")
        if x.shape[0] < 2:
            raise InvalidSizeError(f"need at least 2 pairs, got {x.shape[0]}")
        for name, arr in (("x", x), ("y", y)):
            if not np.all(np.isfinite(arr)):
                raise InvalidValueError(f"{name} contains non-finite values")
            _reject_ties(name, arr)
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.shape[0]


def _reject_ties(name: str, arr: np.ndarray) -> None:
    order = np.argsort(arr, kind="stable")
    dup = np.flatnonzero(np.diff(arr[order]) == 0)
    if dup.size:
        value = arr[order[dup[0]]]
        where = np.flatnonzero(arr == value) + 1
        raise TieError(
            f"tied values in {name}: {name}={value:g} at observations "
            f"{', '.join(str(i) for i in where)} (ties are not supported)"
        )


@dataclass(frozen=True, eq=False)
class RankConfiguration:
    """Permutation ``R`` of ``1..N`` (1-based)."""

    ranks: np.ndarray

    def __post_init__(self) -> None:
        r = np.array(self.ranks)
        if r.ndim != 1 or r.shape[0] < 1:
            raise DimensionError("ranks must be a non-empty vector")
        if not np.all(r == np.round(r)):
            raise InvalidValueError("ranks must be integers")
        r = r.astype(np.int64)
        if not np.array_equal(np.sort(r), np.arange(1, r.shape[0] + 1)):
            raise InvalidValueError("ranks must be a permutation of 1..N")
        r.setflags(write=False)
        object.__setattr__(self, "ranks", r)

    @property
    def n(self) -> int:
        return self.ranks.shape[0]


def rank_pairs(sample: PairedSample) -> RankConfiguration:
    """Sort the pairs by x and rank the y values in that order."""
    d = np.argsort(sample.x, kind="stable")
    y_sorted = sample.y[d]
    ranks = np.empty(sample.n, dtype=np.int64)
    ranks[np.argsort(y_sorted, kind="stable")] = np.arange(1, sample.n + 1)
    return RankConfiguration(ranks)


@dataclass(frozen=True, eq=False)
class StatisticSpec:
    """Score pair plus the quantities the saddlepoint and normal methods need.

    ``r[i, j] = a[i] * (b[j] - b[N])`` for ``j < N`` (0-based ``j`` in the
    array), ``q_offset = b[N] * sum(a)``; ``mean`` and ``variance`` are the
    permutation moments of ``V``.
    """

    a: ScoreVector
    b: ScoreVector
    r: np.ndarray = field(repr=False)
    q_offset: float
    mean: float
    variance: float

    @property
    def n(self) -> int:
        return self.a.n

    @property
    def sd(self) -> float:
        return float(np.sqrt(self.variance))

    def support_bounds(self) -> tuple[float, float]:
        """Smallest and largest attainable statistic (rearrangement inequality)."""
        sa = np.sort(self.a.values)
        sb = np.sort(self.b.values)
        return float(np.dot(sa, sb[::-1])), float(np.dot(sa, sb))

    def lattice_step(self) -> float | None:
        """Grid spacing of the support for integer scores, else ``None``.

        Differences between attainable values are sums of
        ``(a_i - a_j)(b_k - b_l)``, so the support lies on a grid of
        spacing ``gcd(a-differences) * gcd(b-differences)``.
        """
        if not (self.a.is_integral() and self.b.is_integral()):
            return None
        ga = int(np.gcd.reduce(np.abs(np.diff(self.a.values)).astype(np.int64)))
        gb = int(np.gcd.reduce(np.abs(np.diff(self.b.values)).astype(np.int64)))
        return float(ga * gb) if ga and gb else None


def build_spec(a: ScoreVector | Sequence[float], b: ScoreVector | Sequence[float]) -> StatisticSpec:
    if not isinstance(a, ScoreVector):
        a = custom_scores(a)
    if not isinstance(b, ScoreVector):
        b = custom_scores(b)
    if a.n != b.n:
        raise DimensionError(f"score vectors differ in length ({a.n} vs {b.n})")
    av, bv = a.values, b.values
    if np.all(bv == bv[0]):
        raise DegenerateSpecError("rank scores b are constant; the statistic does not vary")
    n = a.n
    r = np.outer(av, bv[:-1] - bv[-1])
    r.setflags(write=False)
    q = float(bv[-1] * av.sum())
    mean = float(n * av.mean() * bv.mean())
    var = float(((av - av.mean()) ** 2).sum() * ((bv - bv.mean()) ** 2).sum() / (n - 1))
    return StatisticSpec(a=a, b=b, r=r, q_offset=q, mean=mean, variance=var)


def _check_same_n(spec: StatisticSpec, ranks: RankConfiguration) -> None:
    if spec.n != ranks.n:
        raise DimensionError(f"spec has N={spec.n} but ranks have N={ranks.n}")


def statistic_value(spec: StatisticSpec, ranks: RankConfiguration) -> float:
    """Direct form ``sum_i a[i] * b[R_i]``."""
    _check_same_n(spec, ranks)
    return float(np.dot(spec.a.values, spec.b.values[ranks.ranks - 1]))


def indicator_form_value(spec: StatisticSpec, ranks: RankConfiguration) -> float:
    """Same statistic through the reduced indicator vectors.

    Position ``i`` carries the unit vector ``Z_i = e_{R_i}``; dropping the
    last coordinate gives ``Z_i^-`` and
    ``V = (b_- - b_N)^T sum_i a[i] Z_i^- + b_N sum_i a[i]``.
    """
    _check_same_n(spec, ranks)
    n = spec.n
    z = np.zeros((n, n))
    z[np.arange(n), ranks.ranks - 1] = 1.0
    z_minus = z[:, :-1]
    l_minus = spec.b.values[:-1] - spec.b.values[-1]
    return float(l_minus @ (spec.a.values @ z_minus) + spec.q_offset)


def v_prime(ranks: RankConfiguration) -> int:
    return int(np.dot(np.arange(1, ranks.n + 1), ranks.ranks))


def d_statistic(ranks: RankConfiguration) -> int:
    """``D = sum (R_i - i)^2``; small values indicate positive association."""
    return int(((ranks.ranks - np.arange(1, ranks.n + 1)) ** 2).sum())


def spearman_rho(ranks: RankConfiguration) -> float:
    n = ranks.n
    return 1.0 - 6.0 * d_statistic(ranks) / (n * (n * n - 1))


def weighted_mann(ranks: RankConfiguration) -> float:
    n = ranks.n
    return n * (n * n - 1) / 6.0 - d_statistic(ranks) / 2.0

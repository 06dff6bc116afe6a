"""Reference p-values: exact enumeration, Monte Carlo permutation, normal.

All tail probabilities are upper tails ``Pr(V >= v0)``.  Observed-value
ties count fully by default; ``mid_p=True`` counts them with weight 1/2
(``Pr(V > v0) + Pr(V = v0)/2``), the quantity a continuous approximation
evaluated at a lattice point actually targets.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import ndtr

from . import _rng
from ._backend import kernels
from .errors import DegenerateSpecError, EnumerationLimitError, InvalidValueError
from .rankstat import StatisticSpec

ENUMERATION_CAP = 10
# absolute tolerance when comparing a statistic with the observed value
TIE_TOL = 1e-9
# replicates per kernel call; the counter-based generator makes results
# independent of this value
MC_CHUNK = 1 << 16

REPORT_SCHEMA = "permsaddle.report/1"


def _tail_counts(stats: np.ndarray, v0: float) -> tuple[int, int]:
    ge = int(np.count_nonzero(stats >= v0 - TIE_TOL))
    eq = int(np.count_nonzero(np.abs(stats - v0) <= TIE_TOL))
    return ge, eq


def _tail(ge: int, eq: int, total: int, mid_p: bool) -> float:
    return (ge - 0.5 * eq) / total if mid_p else ge / total


def all_permutation_statistics(spec: StatisticSpec) -> np.ndarray:
    """Statistic for each of the N! permutations (lexicographic order)."""
    if spec.n > ENUMERATION_CAP:
        raise EnumerationLimitError(
            f"exact enumeration is limited to N <= {ENUMERATION_CAP} "
            f"(N={spec.n} would need {math.factorial(spec.n):,} permutations); use Monte Carlo"
        )
    return kernels.all_statistics(spec.a.values, spec.b.values)


def exact_distribution(spec: StatisticSpec) -> tuple[np.ndarray, np.ndarray]:
    """Distinct attainable values and their permutation counts."""
    stats = all_permutation_statistics(spec)
    # merge values that differ only by rounding
    rounded = np.round(stats / TIE_TOL) * TIE_TOL if not (
        spec.a.is_integral() and spec.b.is_integral()
    ) else stats
    values, counts = np.unique(rounded, return_counts=True)
    return values, counts


def exact_counts(spec: StatisticSpec, v0: float) -> tuple[int, int, int]:
    """``(#{V >= v0}, #{V == v0}, N!)`` over all permutations."""
    stats = all_permutation_statistics(spec)
    ge, eq = _tail_counts(stats, float(v0))
    return ge, eq, stats.shape[0]


def exact_pvalue(spec: StatisticSpec, v0: float, *, mid_p: bool = False) -> float:
    ge, eq, total = exact_counts(spec, v0)
    return _tail(ge, eq, total, mid_p)


@dataclass(frozen=True)
class MonteCarloResult:
    p_value: float
    mid_p_value: float
    std_error: float
    replicates: int
    seed: int
    n_ge: int
    n_eq: int


def mc_statistics(spec: StatisticSpec, replicates: int, seed: int, *labels: int) -> np.ndarray:
    """Statistics of ``replicates`` uniformly shuffled rank assignments.

    Replicate ``m`` is a Fisher-Yates shuffle driven by the counter-based
    SplitMix64 stream ``derive_key(seed, *labels)``; see ``permsaddle._rng``.
    """
    if replicates < 1:
        raise InvalidValueError(f"replicates must be >= 1, got {replicates}")
    key = _rng.derive_key(int(seed), *labels)
    parts = [
        kernels.mc_statistics(spec.a.values, spec.b.values, key, start, min(MC_CHUNK, replicates - start))
        for start in range(0, replicates, MC_CHUNK)
    ]
    return np.concatenate(parts)


def mc_test(spec: StatisticSpec, v0: float, replicates: int, seed: int, *labels: int) -> MonteCarloResult:
    stats = mc_statistics(spec, replicates, seed, *labels)
    ge, eq = _tail_counts(stats, float(v0))
    p = ge / replicates
    return MonteCarloResult(
        p_value=p,
        mid_p_value=(ge - 0.5 * eq) / replicates,
        std_error=math.sqrt(p * (1.0 - p) / replicates),
        replicates=replicates,
        seed=int(seed),
        n_ge=ge,
        n_eq=eq,
    )


def mc_pvalue(
    spec: StatisticSpec, v0: float, replicates: int, seed: int, *, mid_p: bool = False
) -> tuple[float, float]:
    """``(p_hat, sqrt(p_hat (1 - p_hat) / M))`` from ``replicates`` random permutations."""
    res = mc_test(spec, v0, replicates, seed)
    p = res.mid_p_value if mid_p else res.p_value
    return p, math.sqrt(p * (1.0 - p) / replicates)


def normal_pvalue(
    spec: StatisticSpec, v0: float, *, continuity_correction: bool = False
) -> float:
    """``1 - Phi((v0 - E V) / sd V)`` with permutation moments.

    The optional continuity correction moves ``v0`` down half a lattice
    step (integer scores only).
    """
    if spec.variance <= 0:
        raise DegenerateSpecError("statistic has zero permutation variance")
    v = float(v0)
    if continuity_correction:
        h = spec.lattice_step()
        if h is None:
            raise InvalidValueError("continuity correction needs integer scores")
        v -= 0.5 * h
    return float(ndtr(-(v - spec.mean) / math.sqrt(spec.variance)))


@dataclass
class PValueReport:
    """Every p-value computed for one observed statistic, plus provenance."""

    v0: float
    n: int
    saddlepoint: float | None = None
    exact: float | None = None
    exact_mid: float | None = None
    monte_carlo: float | None = None
    monte_carlo_mid: float | None = None
    mc_std_error: float | None = None
    mc_replicates: int | None = None
    normal: float | None = None
    method_diagnostics: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)

    PVALUE_FIELDS = ("saddlepoint", "exact", "exact_mid", "monte_carlo", "monte_carlo_mid", "normal")

    def __post_init__(self) -> None:
        for name in self.PVALUE_FIELDS:
            p = getattr(self, name)
            if p is not None and not 0.0 <= p <= 1.0:
                raise InvalidValueError(f"{name} p-value {p} outside [0, 1]")

    def to_dict(self) -> dict:
        out = {"schema": REPORT_SCHEMA}
        out.update(asdict(self))
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "PValueReport":
        data = dict(data)
        schema = data.pop("schema", None)
        if schema != REPORT_SCHEMA:
            raise InvalidValueError(f"unsupported report schema {schema!r}")
        return cls(**data)

"""Score functions ``f_N(i)`` defining the members of the linear rank class.

All public functions speak 1-based ranks: ``values[0]`` is the score of
rank 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import integrate, special

from .errors import InvalidSizeError, InvalidValueError

KINDS = ("spearman", "fisher_yates", "van_der_waerden", "quadrant", "custom")

# Expected normal order statistics are integrated over |u| <= this bound.
_FY_BOUND = 10.0


@dataclass(frozen=True, eq=False)
class ScoreVector:
    """Length-N score vector together with the family it came from."""

    values: np.ndarray
    kind: str = "custom"

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise InvalidValueError(f"unknown score kind {self.kind!r}; expected one of {KINDS}")
        arr = np.array(self.values, dtype=np.float64)
        if arr.ndim != 1:
            raise InvalidValueError("scores must be a one-dimensional vector")
        if arr.shape[0] < 2:
            raise InvalidSizeError(f"need at least 2 scores, got {arr.shape[0]}")
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0]) + 1
            raise InvalidValueError(f"score {bad} is not finite")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def is_integral(self) -> bool:
        return bool(np.all(self.values == np.round(self.values)))


def _check_n(n: int) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise InvalidSizeError(f"N must be an integer, got {n!r}")
    n = int(n)
    if n < 2:
        raise InvalidSizeError(f"N must be at least 2, got {n}")
    return n


def spearman_scores(n: int) -> ScoreVector:
    """Identity scores ``(1, 2, ..., N)``; with them the statistic is ``V' = sum i R_i``."""
    n = _check_n(n)
    return ScoreVector(np.arange(1, n + 1, dtype=np.float64), "spearman")


def van_der_waerden_scores(n: int) -> ScoreVector:
    """Normal quantile scores ``Phi^{-1}(i / (N + 1))``."""
    n = _check_n(n)
    q = special.ndtri(np.arange(1, n + 1) / (n + 1))
    # exact antisymmetry; ndtri is accurate to a few ulps on either side
    q = 0.5 * (q - q[::-1])
    return ScoreVector(q, "van_der_waerden")


def _order_statistic_mean(i: int, n: int) -> float:
    log_coef = math.log(n) + special.gammaln(n) - special.gammaln(i) - special.gammaln(n - i + 1)

    def integrand(u: float) -> float:
        logf = (
            log_coef
            - 0.5 * u * u
            - 0.5 * math.log(2.0 * math.pi)
            + (i - 1) * special.log_ndtr(u)
            + (n - i) * special.log_ndtr(-u)
        )
        return u * math.exp(logf)

    # the density of the i-th order statistic peaks near the quantile i/(n+1)
    peak = float(special.ndtri(i / (n + 1)))
    lo, hi = -_FY_BOUND, _FY_BOUND
    value = 0.0
    for left, right in ((lo, peak), (peak, hi)):
        part, _ = integrate.quad(integrand, left, right, epsabs=1e-13, epsrel=1e-12, limit=400)
        value += part
    return value


@lru_cache(maxsize=64)
def _fisher_yates_values(n: int) -> tuple[float, ...]:
    out = np.zeros(n)
    for i in range(n // 2 + 1, n + 1):
        out[i - 1] = _order_statistic_mean(i, n)
    out[: n // 2] = -out[n - n // 2 :][::-1]
    if n % 2:
        out[n // 2] = 0.0
    return tuple(out)


def fisher_yates_scores(n: int) -> ScoreVector:
    """Expected standard normal order statistics ``E U_N^(i)``.

    Each mean is ``N C(N-1, i-1) int u phi(u) Phi(u)^(i-1) (1-Phi(u))^(N-i) du``,
    integrated adaptively over ``[-10, 10]`` with the integrand assembled in
    log space (``log_ndtr``) so large N does not underflow.  Only the upper
    half is integrated; the lower half follows by antisymmetry.
    """
    n = _check_n(n)
    return ScoreVector(np.array(_fisher_yates_values(n)), "fisher_yates")


def quadrant_scores(n: int) -> ScoreVector:
    n = _check_n(n)
    i = np.arange(1, n + 1, dtype=np.float64)
    return ScoreVector(np.sign(i - (n + 1) / 2.0), "quadrant")


def custom_scores(values: Sequence[float]) -> ScoreVector:
    """Wrap user-supplied scores (e.g. regression scores ``xi_i``)."""
    return ScoreVector(np.asarray(values, dtype=np.float64), "custom")


_GENERATORS = {
    "spearman": spearman_scores,
    "fisher_yates": fisher_yates_scores,
    "van_der_waerden": van_der_waerden_scores,
    "quadrant": quadrant_scores,
}


def make_scores(kind: str, n: int) -> ScoreVector:
    """Dispatch on a named score family."""
    try:
        gen = _GENERATORS[kind]
    except KeyError:
        raise InvalidValueError(
            f"unknown score kind {kind!r}; expected one of {sorted(_GENERATORS)}"
        ) from None
    return gen(n)

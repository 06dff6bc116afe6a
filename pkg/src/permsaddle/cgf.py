"""Joint CGF of the reduced indicator sums under uniform multinomial sampling.

Each position ``i`` independently picks one of ``N`` categories with
probability ``1/N``.  With logits ``s_j + r[i, j] t`` for ``j < N`` and
``0`` for the last category,

    K(s, t) = sum_i log( (1/N) [ sum_j exp(s_j + r[i, j] t) + 1 ] )

is the CGF of ``(sum_i Z_i^-, sum_ij r[i, j] Z_ij)``.  Conditioning the
first block on the all-ones vector recovers the permutation distribution of
``V - Q``.  Derivatives are the means and covariances of per-position
softmax distributions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .errors import DimensionError, InvalidSizeError, InvalidValueError
from .rankstat import StatisticSpec


@dataclass(frozen=True, eq=False)
class CgfPoint:
    s: np.ndarray
    t: float
    value: float
    gradient: np.ndarray
    hessian: np.ndarray = field(repr=False)

    def log_det_hessian(self) -> tuple[float, float]:
        """``(sign, log|det K''|)`` via LU; stable for large N."""
        sign, logdet = np.linalg.slogdet(self.hessian)
        return float(sign), float(logdet)


def _logits(spec: StatisticSpec, s: np.ndarray, t: float) -> tuple[np.ndarray, np.ndarray]:
    n = spec.n
    s = np.asarray(s, dtype=np.float64)
    if s.shape != (n - 1,):
        raise DimensionError(f"s must have length N-1 = {n - 1}, got shape {s.shape}")
    if not (np.all(np.isfinite(s)) and np.isfinite(t)):
        raise InvalidValueError("CGF arguments must be finite")
    logits = np.empty((n, n))
    logits[:, :-1] = s[None, :] + spec.r * t
    logits[:, -1] = 0.0
    # logsumexp subtracts the row max (including the fixed 0 logit) first
    lse = logsumexp(logits, axis=1)
    return logits, lse


def cgf_value(spec: StatisticSpec, s: np.ndarray, t: float) -> float:
    """``K(s, t)`` alone; cheaper than :func:`cgf_eval`."""
    _, lse = _logits(spec, s, t)
    return float(lse.sum() - spec.n * np.log(spec.n))


def cgf_eval(spec: StatisticSpec, s: np.ndarray, t: float) -> CgfPoint:
    """Value, gradient and Hessian of ``K`` at ``(s, t)``.

    Gradient is ordered ``(dK/ds_1 .. dK/ds_{N-1}, dK/dt)``; the Hessian
    uses the same ordering.  Cost is one ``N x N`` matrix product.
    """
    t = float(t)
    logits, lse = _logits(spec, s, t)
    n = spec.n
    p = np.exp(logits - lse[:, None])[:, :-1]
    r = spec.r
    pr = p * r
    row_mean = pr.sum(axis=1)

    grad = np.empty(n)
    grad[:-1] = p.sum(axis=0)
    grad[-1] = row_mean.sum()

    hess = np.empty((n, n))
    hess[:-1, :-1] = -(p.T @ p)
    hess[np.arange(n - 1), np.arange(n - 1)] += grad[:-1]
    cross = pr.sum(axis=0) - p.T @ row_mean
    hess[:-1, -1] = cross
    hess[-1, :-1] = cross
    hess[-1, -1] = float((pr * r).sum() - (row_mean**2).sum())

    value = float(lse.sum() - n * np.log(n))
    return CgfPoint(s=np.array(s, dtype=np.float64), t=t, value=value, gradient=grad, hessian=hess)


def denominator_hessian(n: int) -> np.ndarray:
    """s-block of the Hessian at the origin: ``I - (1/N) 11^T``."""
    if n < 2:
        raise InvalidSizeError(f"N must be at least 2, got {n}")
    return np.eye(n - 1) - np.full((n - 1, n - 1), 1.0 / n)


def denominator_hessian_det(n: int) -> float:
    """``|K''_ss(0, 0)|``, which equals ``1/N`` for uniform category weights."""
    sign, logdet = np.linalg.slogdet(denominator_hessian(n))
    return float(sign * np.exp(logdet))

"""Double saddlepoint tail probability ``Pr(V >= v0)``.

The numerator saddlepoint ``(s_hat, t_hat)`` solves

    dK/ds_j = 1   (j = 1..N-1),      dK/dt = v0 - Q,

and, with uniform category weights, the denominator saddlepoint is the
origin (``K(0, 0) = 0``, ``|K''_ss(0, 0)| = 1/N``).  The tail is

    1 - Phi(w) - phi(w) (1/w - 1/u),
    w = sgn(t) sqrt(-2 [K(s, t) - s^T 1 - (v0 - Q) t]),
    u = t sqrt(|K''(s, t)| / |K''_ss(0, 0)|).

Everything runs on the shifted statistic ``V - Q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import logsumexp, ndtr

from .cgf import CgfPoint, cgf_eval
from .errors import DegenerateSpecError, SolverError
from .rankstat import StatisticSpec

CONVERGED = "converged"
AT_MEAN = "at_mean"
MAX_SUPPORT = "max_support"
MIN_SUPPORT = "min_support"
FAILED = "failed"

MAX_ITER = 200
MAX_HALVINGS = 30
# half-width (in standard deviations) of the band around the mean where the
# tail is interpolated instead of evaluated; the formula is 0/0 at the mean
MEAN_BAND = 1e-4
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
# raw tail values further than this outside [0, 1] are reported as failures
# rather than clamped; it happens only between the outermost lattice points
# and the support bounds, where the tilted Hessian collapses and u -> 0
CLAMP_SLACK = 1e-3


@dataclass(frozen=True, eq=False)
class SaddlepointSolution:
    v0: float
    s_hat: np.ndarray
    t_hat: float
    cgf_at_solution: CgfPoint | None = field(repr=False)
    w_hat: float
    u_hat: float
    iterations: int
    residual_norm: float
    status: str
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status in (CONVERGED, AT_MEAN)


@dataclass(frozen=True, eq=False)
class SaddlepointResult:
    """P-value plus the bookkeeping needed to report how it was obtained."""

    p_value: float | None
    v_eval: float
    solution: SaddlepointSolution
    clamped: bool = False
    raw_value: float | None = None
    note: str = ""

    def diagnostics(self) -> dict:
        sol = self.solution
        out = {
            "status": sol.status,
            "w_hat": _finite_or_none(sol.w_hat),
            "u_hat": _finite_or_none(sol.u_hat),
            "t_hat": _finite_or_none(sol.t_hat),
            "iterations": sol.iterations,
            "residual_norm": _finite_or_none(sol.residual_norm),
            "v_eval": self.v_eval,
            "clamped": self.clamped,
        }
        if self.note or sol.message:
            out["note"] = self.note or sol.message
        return out


def _finite_or_none(x: float) -> float | None:
    return float(x) if np.isfinite(x) else None


def _edge_tol(v: float) -> float:
    return 1e-9 * max(1.0, abs(v))


def _exponent(spec: StatisticSpec, s: np.ndarray, t: float, v0: float) -> float:
    """``K(s, t) - s^T 1 - (v0 - Q) t``, evaluated without cancellation near 0."""
    n = spec.n
    logits = s[None, :] + spec.r * t
    if np.max(np.abs(logits)) <= 0.5:
        # log((1/N) sum_j e^{L_ij}) = log1p(mean_j expm1(L_ij)), last logit 0
        terms = np.log1p(np.expm1(logits).sum(axis=1) / n)
    else:
        full = np.concatenate([logits, np.zeros((n, 1))], axis=1)
        terms = logsumexp(full, axis=1) - math.log(n)
    return float(terms.sum() - s.sum() - (v0 - spec.q_offset) * t)


def _newton(spec, target, z0, max_iter, tol):
    """Damped Newton on grad K(z) = target.  Returns (z, point, residual, iters, ok)."""
    n = spec.n
    z = z0.copy()
    point = cgf_eval(spec, z[:-1], z[-1])
    g = point.gradient - target
    res = float(np.linalg.norm(g))
    it = 0
    polish = 0
    while it < max_iter:
        if res <= tol:
            # a few extra steps buy digits that 1/w - 1/u needs near the mean
            if polish >= 2:
                break
            polish += 1
        it += 1
        try:
            step = np.linalg.solve(point.hessian, -g)
        except np.linalg.LinAlgError:
            return z, point, res, it, res <= tol
        lam = 1.0
        accepted = False
        for _ in range(MAX_HALVINGS + 1):
            trial = z + lam * step
            if np.all(np.isfinite(trial)):
                tpoint = cgf_eval(spec, trial[:-1], trial[-1])
                tg = tpoint.gradient - target
                tres = float(np.linalg.norm(tg))
                if tres < res:
                    accepted = True
                    break
            lam *= 0.5
        if not accepted:
            return z, point, res, it, res <= tol
        z, point, g, res = trial, tpoint, tg, tres
    assert z.shape == (n,)
    return z, point, res, it, res <= tol


def _support_status(spec: StatisticSpec, v0: float) -> str | None:
    vmin, vmax = spec.support_bounds()
    if v0 <= vmin + _edge_tol(vmin):
        return MIN_SUPPORT
    if v0 >= vmax - _edge_tol(vmax):
        return MAX_SUPPORT
    return None


def solve_saddlepoint(
    spec: StatisticSpec, v0: float, *, tol: float = 1e-10, max_iter: int = MAX_ITER
) -> SaddlepointSolution:
    """Solve the N saddlepoint equations for the observed value ``v0``.

    Newton's method starts at the origin, uses the analytic Hessian as the
    Jacobian and halves the step until the residual norm drops.  If that
    stalls, the target is approached along a path of intermediate values
    from the mean outwards, warm-starting each solve.
    """
    if spec.variance <= 0:
        raise DegenerateSpecError("statistic has zero permutation variance")
    v0 = float(v0)
    n = spec.n
    edge = _support_status(spec, v0)
    if edge is not None:
        return SaddlepointSolution(
            v0=v0, s_hat=np.zeros(n - 1), t_hat=math.nan, cgf_at_solution=None,
            w_hat=math.nan, u_hat=math.nan, iterations=0, residual_norm=math.nan,
            status=edge, message=f"v0 = {v0:g} is not inside the open support",
        )
    if abs(v0 - spec.mean) <= 1e-9 * spec.sd:
        point = cgf_eval(spec, np.zeros(n - 1), 0.0)
        return SaddlepointSolution(
            v0=v0, s_hat=np.zeros(n - 1), t_hat=0.0, cgf_at_solution=point,
            w_hat=0.0, u_hat=0.0, iterations=0, residual_norm=0.0, status=AT_MEAN,
        )

    shift = v0 - spec.q_offset
    scale_tol = tol * max(1.0, abs(shift))
    target = np.ones(n)
    target[-1] = shift
    z, point, res, iters, ok = _newton(spec, target, np.zeros(n), max_iter, scale_tol)

    if not ok:
        z, point, res, iters, ok = _homotopy(spec, v0, tol, max_iter, iters)
    if not ok:
        return SaddlepointSolution(
            v0=v0, s_hat=z[:-1], t_hat=float(z[-1]), cgf_at_solution=point,
            w_hat=math.nan, u_hat=math.nan, iterations=iters, residual_norm=res,
            status=FAILED, message="Newton iteration did not reach the residual tolerance",
        )

    s_hat, t_hat = z[:-1], float(z[-1])
    kappa = _exponent(spec, s_hat, t_hat, v0)
    w_sq = -2.0 * kappa
    if w_sq < 0:
        if w_sq < -1e-12:
            return _failed(v0, z, point, iters, res, f"negative w^2 ({w_sq:.3g})")
        w_sq = 0.0
    sign, logdet = point.log_det_hessian()
    if sign <= 0 or not np.isfinite(logdet):
        return _failed(v0, z, point, iters, res, "Hessian at the saddlepoint is singular")
    # |K''_ss(0,0)| = 1/N
    u_hat = t_hat * math.exp(0.5 * (logdet + math.log(n)))
    w_hat = math.copysign(math.sqrt(w_sq), t_hat)
    return SaddlepointSolution(
        v0=v0, s_hat=s_hat, t_hat=t_hat, cgf_at_solution=point, w_hat=w_hat,
        u_hat=u_hat, iterations=iters, residual_norm=res, status=CONVERGED,
    )


def _failed(v0, z, point, iters, res, msg):
    return SaddlepointSolution(
        v0=v0, s_hat=z[:-1], t_hat=float(z[-1]), cgf_at_solution=point,
        w_hat=math.nan, u_hat=math.nan, iterations=iters, residual_norm=res,
        status=FAILED, message=msg,
    )


def _homotopy(spec, v0, tol, max_iter, used):
    n = spec.n
    for pieces in (8, 32, 128):
        z = np.zeros(n)
        total = used
        ok = True
        for k in range(1, pieces + 1):
            v = spec.mean + (v0 - spec.mean) * k / pieces
            target = np.ones(n)
            target[-1] = v - spec.q_offset
            z, point, res, it, ok = _newton(
                spec, target, z, max_iter, tol * max(1.0, abs(target[-1]))
            )
            total += it
            if not ok:
                break
        if ok:
            return z, point, res, total, True
    return z, point, res, total, False


def _lugannani_rice(w: float, u: float) -> float:
    return float(ndtr(-w) - _INV_SQRT_2PI * math.exp(-0.5 * w * w) * (1.0 / w - 1.0 / u))


def tail_probability(spec: StatisticSpec, solution: SaddlepointSolution) -> float:
    """Unclamped approximation to ``Pr(V >= v0)`` from a solved saddlepoint.

    Within ``MEAN_BAND`` standard deviations of the mean the value is the
    linear interpolation between the formula evaluated at the two band
    edges; at the mean itself that is their average.
    """
    if not solution.ok:
        raise SolverError(f"saddlepoint not available: {solution.status} {solution.message}".strip())
    half = MEAN_BAND * spec.sd
    if solution.status == AT_MEAN or abs(solution.v0 - spec.mean) < half:
        lo_sol = solve_saddlepoint(spec, spec.mean - half)
        hi_sol = solve_saddlepoint(spec, spec.mean + half)
        if not (lo_sol.status == CONVERGED and hi_sol.status == CONVERGED):
            raise SolverError("saddlepoint near the mean did not converge")
        lo = _lugannani_rice(lo_sol.w_hat, lo_sol.u_hat)
        hi = _lugannani_rice(hi_sol.w_hat, hi_sol.u_hat)
        frac = (solution.v0 - (spec.mean - half)) / (2.0 * half)
        return lo + (hi - lo) * frac
    return _lugannani_rice(solution.w_hat, solution.u_hat)


def _max_point_mass(spec: StatisticSpec) -> float | None:
    """``Pr(V = max)``; known in closed form when one score vector has no ties."""
    def group_factorials(v: np.ndarray) -> int:
        _, counts = np.unique(v, return_counts=True)
        return math.prod(math.factorial(int(c)) for c in counts)

    a, b = spec.a.values, spec.b.values
    if np.unique(a).size == a.size:
        ways = group_factorials(b)
    elif np.unique(b).size == b.size:
        ways = group_factorials(a)
    else:
        return None
    try:
        return ways / math.factorial(spec.n)
    except OverflowError:
        return 0.0


def saddlepoint_pvalue(
    spec: StatisticSpec,
    v0: float,
    *,
    lattice_correction: bool = False,
    lattice_step: float | None = None,
) -> SaddlepointResult:
    """``Pr(V >= v0)`` with support-edge conventions and clamping.

    Below (or at) the support minimum the answer is exactly 1, above the
    maximum exactly 0, and at the maximum it is the exact point mass when
    that has a closed form.  With ``lattice_correction`` the formula is
    evaluated at ``v0 - h/2``, ``h`` being the lattice spacing.
    """
    v_eval = float(v0)
    if lattice_correction:
        h = lattice_step if lattice_step is not None else spec.lattice_step()
        if h is None:
            raise ValueError("lattice correction needs integer scores or an explicit lattice_step")
        v_eval -= 0.5 * h
    sol = solve_saddlepoint(spec, v_eval)
    if sol.status == MIN_SUPPORT:
        return SaddlepointResult(1.0, v_eval, sol, note="v0 at or below the support minimum")
    if sol.status == MAX_SUPPORT:
        _, vmax = spec.support_bounds()
        if v_eval > vmax + _edge_tol(vmax):
            return SaddlepointResult(0.0, v_eval, sol, note="v0 above the support maximum")
        mass = _max_point_mass(spec)
        if mass is None:
            return SaddlepointResult(None, v_eval, sol, note="v0 at the support maximum")
        return SaddlepointResult(mass, v_eval, sol, note="v0 at the support maximum; exact point mass")
    if not sol.ok:
        return SaddlepointResult(None, v_eval, sol, note=sol.message)
    raw = tail_probability(spec, sol)
    if raw < -CLAMP_SLACK or raw > 1.0 + CLAMP_SLACK:
        msg = f"tail formula gave {raw:.4g}; Hessian is near-singular this close to the support edge"
        return SaddlepointResult(None, v_eval, replace(sol, status=FAILED, message=msg), raw_value=raw, note=msg)
    p = min(1.0, max(0.0, raw))
    return SaddlepointResult(p, v_eval, sol, clamped=(p != raw), raw_value=raw)

import math

import numpy as np
import pytest

from permsaddle.cgf import cgf_value
from permsaddle.errors import SolverError
from permsaddle.oracles import exact_pvalue
from permsaddle.rankstat import build_spec
from permsaddle.saddle import (
    AT_MEAN,
    CONVERGED,
    FAILED,
    MAX_SUPPORT,
    MIN_SUPPORT,
    saddlepoint_pvalue,
    solve_saddlepoint,
    tail_probability,
)
from permsaddle.scores import custom_scores, fisher_yates_scores, spearman_scores, van_der_waerden_scores


def spearman(n):
    sc = spearman_scores(n)
    return build_spec(sc, sc)


class TestSolve:
    def test_at_mean(self):
        spec = spearman(7)  # mean 112 is on the lattice
        sol = solve_saddlepoint(spec, spec.mean)
        assert sol.status == AT_MEAN
        assert sol.t_hat == 0.0

    def test_nayak_solution(self, spearman15):
        sol = solve_saddlepoint(spearman15, 1006)
        assert sol.status == CONVERGED
        assert sol.t_hat > 0  # v0 = 1006 lies above the mean 960
        assert sol.residual_norm <= 1e-10 * max(1, abs(1006 - spearman15.q_offset))
        kappa = cgf_value(spearman15, sol.s_hat, sol.t_hat) - sol.s_hat.sum() - (1006 - 1800) * sol.t_hat
        assert sol.w_hat**2 / 2 == pytest.approx(-kappa, abs=1e-9)

    def test_solution_satisfies_equations(self):
        spec = build_spec(fisher_yates_scores(12), van_der_waerden_scores(12))
        v0 = spec.mean - 1.7 * spec.sd
        sol = solve_saddlepoint(spec, v0)
        g = sol.cgf_at_solution.gradient
        np.testing.assert_allclose(g[:-1], 1.0, atol=1e-10)
        assert g[-1] == pytest.approx(v0 - spec.q_offset, abs=1e-9)
        assert sol.t_hat < 0 and sol.w_hat < 0 and sol.u_hat < 0

    def test_support_edges(self):
        spec = spearman(6)
        lo, hi = spec.support_bounds()
        assert solve_saddlepoint(spec, lo).status == MIN_SUPPORT
        assert solve_saddlepoint(spec, lo - 5).status == MIN_SUPPORT
        assert solve_saddlepoint(spec, hi).status == MAX_SUPPORT

    def test_tail_rejects_unsolved(self):
        spec = spearman(6)
        with pytest.raises(SolverError):
            tail_probability(spec, solve_saddlepoint(spec, 1000))

    @pytest.mark.parametrize("n", [30, 120])
    def test_larger_n_converges(self, n):
        spec = spearman(n)
        sol = solve_saddlepoint(spec, spec.mean + 2.5 * spec.sd)
        assert sol.status == CONVERGED
        assert sol.iterations < 30


class TestPValue:
    def test_nayak(self, spearman15):
        assert saddlepoint_pvalue(spearman15, 1006).p_value == pytest.approx(0.2763, abs=1e-3)

    def test_edge_conventions(self):
        spec = spearman(6)
        lo, hi = spec.support_bounds()
        assert saddlepoint_pvalue(spec, lo).p_value == 1.0
        assert saddlepoint_pvalue(spec, hi + 1).p_value == 0.0
        assert saddlepoint_pvalue(spec, hi).p_value == pytest.approx(1 / math.factorial(6))

    def test_at_mean_is_half_for_symmetric(self):
        # V' is symmetric about its mean, so the limit must be 1/2
        spec = spearman(7)
        assert saddlepoint_pvalue(spec, spec.mean).p_value == pytest.approx(0.5, abs=1e-6)

    def test_continuity_through_mean(self):
        spec = spearman(9)
        d = np.array([-1e-3, -1e-4, -1e-5, 0.0, 1e-5, 1e-4, 1e-3]) * spec.sd
        p = np.array([saddlepoint_pvalue(spec, spec.mean + x).p_value for x in d])
        assert np.all(np.diff(p) <= 1e-9)
        slope = (p[-1] - p[0]) / (d[-1] - d[0])
        np.testing.assert_allclose(p, p[3] + slope * d, atol=1e-6)

    def test_one_step_above_mean_n8(self):
        spec = spearman(8)  # mean 162, lattice step 1
        res = saddlepoint_pvalue(spec, 163)
        assert res.solution.status == CONVERGED
        assert abs(res.p_value - exact_pvalue(spec, 163, mid_p=True)) < 0.005

    def test_lattice_correction(self):
        spec = spearman(8)
        res = saddlepoint_pvalue(spec, 170, lattice_correction=True)
        assert res.v_eval == 169.5
        # the shifted evaluation targets the full-count tail
        assert abs(res.p_value - exact_pvalue(spec, 170)) < 0.01

    def test_lattice_correction_needs_integer_scores(self):
        spec = build_spec(fisher_yates_scores(6), fisher_yates_scores(6))
        with pytest.raises(ValueError):
            saddlepoint_pvalue(spec, 3.0, lattice_correction=True)

    def test_edge_breakdown_reported_not_extrapolated(self):
        spec = spearman(10)
        lo, _ = spec.support_bounds()
        res = saddlepoint_pvalue(spec, lo + 0.01)
        assert res.p_value is None
        assert res.solution.status == FAILED

    def test_clamp_records_diagnostic(self):
        spec = spearman(10)
        res = saddlepoint_pvalue(spec, 240)
        assert 0 <= res.p_value <= 1
        assert res.diagnostics()["clamped"] is (res.raw_value != res.p_value)


class TestProperties:
    def test_monotone_grid(self):
        spec = spearman(10)
        lo, hi = spec.support_bounds()
        grid = np.linspace(lo, hi, 22)[1:-1]
        p = np.array([saddlepoint_pvalue(spec, v).p_value for v in grid])
        assert np.all(np.diff(p) <= 1e-9)

    @pytest.mark.parametrize("alpha, beta", [(3.0, 7.0), (0.25, -2.0), (10.0, 0.0)])
    def test_affine_invariance(self, alpha, beta):
        a, b = spearman_scores(8), spearman_scores(8)
        s1 = build_spec(a, b)
        s2 = build_spec(a, custom_scores(alpha * b.values + beta))
        for v in (150.0, 170.0, 185.0):
            v2 = alpha * v + beta * a.values.sum()
            r1, r2 = solve_saddlepoint(s1, v), solve_saddlepoint(s2, v2)
            assert r1.w_hat == pytest.approx(r2.w_hat, abs=1e-9)
            assert r1.u_hat == pytest.approx(r2.u_hat, abs=1e-9)
            assert saddlepoint_pvalue(s1, v).p_value == pytest.approx(saddlepoint_pvalue(s2, v2).p_value, abs=1e-9)

    def test_signs_agree(self):
        spec = build_spec(fisher_yates_scores(10), fisher_yates_scores(10))
        for k in (-2.0, -0.5, 0.3, 1.9):
            sol = solve_saddlepoint(spec, spec.mean + k * spec.sd)
            assert np.sign(sol.w_hat) == np.sign(sol.u_hat) == np.sign(k)

    def test_symmetric_tails_vs_enumeration(self):
        spec = spearman(6)
        for d in (2.5, 5.5, 9.5):
            up = spec.mean + d
            down = spec.mean - d
            sad_sum = saddlepoint_pvalue(spec, up).p_value + saddlepoint_pvalue(spec, down).p_value
            exact_sum = exact_pvalue(spec, up, mid_p=True) + exact_pvalue(spec, down, mid_p=True)
            assert abs(sad_sum - exact_sum) < 0.01
            assert abs(exact_sum - 1.0) < 1e-12

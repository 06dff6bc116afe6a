"""Saddlepoint p-values for permutation tests of independence.

Linear rank statistics ``V = sum_i a[i] b[R_i]`` (Spearman's ``V'``,
Fisher-Yates, van der Waerden, quadrant, or custom scores) are referred to
their permutation distribution through a double saddlepoint approximation,
with exact enumeration, Monte Carlo and the normal approximation alongside.
"""

from ._backend import BACKEND
from .cgf import CgfPoint, cgf_eval, cgf_value, denominator_hessian_det
from .errors import (
    DataFormatError,
    DegenerateSpecError,
    EnumerationLimitError,
    PermSaddleError,
    SolverError,
    TieError,
)
from .independence import independence_test
from .oracles import (
    MonteCarloResult,
    PValueReport,
    exact_distribution,
    exact_pvalue,
    mc_pvalue,
    mc_test,
    normal_pvalue,
)
from .rankstat import (
    PairedSample,
    RankConfiguration,
    StatisticSpec,
    build_spec,
    d_statistic,
    indicator_form_value,
    rank_pairs,
    spearman_rho,
    statistic_value,
    v_prime,
    weighted_mann,
)
from .saddle import SaddlepointSolution, saddlepoint_pvalue, solve_saddlepoint, tail_probability
from .scores import (
    ScoreVector,
    custom_scores,
    fisher_yates_scores,
    make_scores,
    quadrant_scores,
    spearman_scores,
    van_der_waerden_scores,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CgfPoint",
    "DataFormatError",
    "DegenerateSpecError",
    "EnumerationLimitError",
    "MonteCarloResult",
    "PValueReport",
    "PairedSample",
    "PermSaddleError",
    "RankConfiguration",
    "SaddlepointSolution",
    "ScoreVector",
    "SolverError",
    "StatisticSpec",
    "TieError",
    "build_spec",
    "cgf_eval",
    "cgf_value",
    "custom_scores",
    "d_statistic",
    "denominator_hessian_det",
    "exact_distribution",
    "exact_pvalue",
    "fisher_yates_scores",
    "independence_test",
    "indicator_form_value",
    "make_scores",
    "mc_pvalue",
    "mc_test",
    "normal_pvalue",
    "quadrant_scores",
    "rank_pairs",
    "saddlepoint_pvalue",
    "solve_saddlepoint",
    "spearman_rho",
    "spearman_scores",
    "statistic_value",
    "tail_probability",
    "v_prime",
    "van_der_waerden_scores",
    "weighted_mann",
]

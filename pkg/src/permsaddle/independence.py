"""End-to-end independence test on a paired sample."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import EnumerationLimitError, InvalidValueError, PermSaddleError
from .oracles import PValueReport, exact_counts, mc_test, normal_pvalue
from .rankstat import PairedSample, build_spec, rank_pairs, statistic_value
from .saddle import saddlepoint_pvalue
from .scores import ScoreVector, custom_scores, make_scores

METHODS = ("saddlepoint", "exact", "mc", "normal")
ALTERNATIVES = ("greater", "less")


def independence_test(
    sample: PairedSample,
    *,
    scores: str = "spearman",
    a_scores: Sequence[float] | None = None,
    b_scores: Sequence[float] | None = None,
    methods: Iterable[str] = ("saddlepoint", "normal"),
    mc_replicates: int = 100_000,
    seed: int = 0,
    alternative: str = "greater",
    lattice_correction: bool = False,
) -> PValueReport:
    """Rank ``sample``, form ``V = sum a[i] b[R_i]`` and run each method.

    ``"greater"`` reports ``Pr(V >= v0)``; ``"less"`` reports ``Pr(V <= v0)``
    by testing the statistic with negated ``a`` scores against ``-v0``.
    A failing method is recorded under ``errors`` and the others still run.
    """
    methods = tuple(dict.fromkeys(methods))
    unknown = set(methods) - set(METHODS)
    if not methods or unknown:
        raise InvalidValueError(f"methods must be a non-empty subset of {METHODS}, got {methods}")
    if alternative not in ALTERNATIVES:
        raise InvalidValueError(f"alternative must be one of {ALTERNATIVES}")
    if "mc" in methods and mc_replicates < 1:
        raise InvalidValueError("mc_replicates must be >= 1")

    n = sample.n
    if scores == "custom":
        if a_scores is None:
            raise InvalidValueError("custom scores need a score vector")
        a = custom_scores(a_scores)
        b = custom_scores(b_scores if b_scores is not None else a_scores)
    else:
        a = make_scores(scores, n)
        b = a
    if a.n != n or b.n != n:
        raise InvalidValueError(f"score vectors have length {a.n}/{b.n} but the sample has N={n}")

    ranks = rank_pairs(sample)
    spec = build_spec(a, b)
    v0 = statistic_value(spec, ranks)
    if alternative == "less":
        test_spec = build_spec(ScoreVector(-a.values, "custom"), b)
        v_test = -v0
    else:
        test_spec, v_test = spec, v0

    report = PValueReport(v0=v0, n=n)
    report.inputs = {
        "n": n,
        "v0": v0,
        "scores": scores,
        "alternative": alternative,
        "seed": seed,
        "methods": list(methods),
        "mean": spec.mean,
        "variance": spec.variance,
        "q_offset": spec.q_offset,
        "ranks": ranks.ranks.tolist(),
        "lattice_correction": lattice_correction,
    }

    if "saddlepoint" in methods:
        try:
            res = saddlepoint_pvalue(test_spec, v_test, lattice_correction=lattice_correction)
        except (PermSaddleError, ValueError) as exc:
            report.errors["saddlepoint"] = str(exc)
        else:
            report.method_diagnostics["saddlepoint"] = res.diagnostics()
            if res.p_value is None:
                report.errors["saddlepoint"] = res.note or res.solution.status
            else:
                report.saddlepoint = res.p_value
    if "exact" in methods:
        try:
            ge, eq, total = exact_counts(test_spec, v_test)
        except EnumerationLimitError as exc:
            report.errors["exact"] = str(exc)
        else:
            report.exact = ge / total
            report.exact_mid = (ge - 0.5 * eq) / total
            report.method_diagnostics["exact"] = {"permutations": total, "n_ge": ge, "n_eq": eq}
    if "mc" in methods:
        mc = mc_test(test_spec, v_test, mc_replicates, seed)
        report.monte_carlo = mc.p_value
        report.monte_carlo_mid = mc.mid_p_value
        report.mc_std_error = mc.std_error
        report.mc_replicates = mc.replicates
        report.method_diagnostics["mc"] = {
            "seed": mc.seed,
            "n_ge": mc.n_ge,
            "n_eq": mc.n_eq,
            "generator": "splitmix64-counter/fisher-yates",
        }
    if "normal" in methods:
        try:
            report.normal = normal_pvalue(test_spec, v_test)
        except PermSaddleError as exc:
            report.errors["normal"] = str(exc)
        else:
            report.method_diagnostics["normal"] = {
                "z": float((v_test - test_spec.mean) / np.sqrt(test_spec.variance))
            }
    return report

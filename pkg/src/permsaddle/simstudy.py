"""Accuracy study: saddlepoint vs. normal approximation against MC truth.

Data come from the shared-noise dependence model ``X = X' + lam*e``,
``Y = Y' + lam*e`` with standard Logistic ``X'``, standard Gumbel ``Y'``
and Uniform(0, 1) ``e``; ``lam = 0`` is the independence null.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _rng
from .errors import ConfigError, PermSaddleError
from .oracles import mc_test, normal_pvalue
from .rankstat import PairedSample, build_spec, rank_pairs, statistic_value
from .saddle import saddlepoint_pvalue
from .scores import make_scores

CSV_FIELDS = (
    "n", "lambda", "sad_prop", "abs_err_sad", "rel_abs_err_sad",
    "abs_err_norm", "datasets", "failures",
)
TRUTH_TIES = ("mid", "full")


@dataclass(frozen=True)
class StudyConfig:
    sample_sizes: tuple[int, ...] = (10, 20, 30)
    lambdas: tuple[float, ...] = (0.0, 0.5)
    datasets_per_cell: int = 1000
    truth_replicates: int = 1_000_000
    seed: int = 0
    score_kind: str = "spearman"
    # "mid": truth counts observed-value ties with weight 1/2 (see README)
    truth_ties: str = "mid"

    def __post_init__(self) -> None:
        object.__setattr__(self, "sample_sizes", tuple(int(n) for n in self.sample_sizes))
        object.__setattr__(self, "lambdas", tuple(float(x) for x in self.lambdas))
        if not self.sample_sizes or any(n < 2 for n in self.sample_sizes):
            raise ConfigError("sample_sizes must be a non-empty list of integers >= 2")
        if not self.lambdas or any(not math.isfinite(x) or x < 0 for x in self.lambdas):
            raise ConfigError("lambdas must be a non-empty list of non-negative numbers")
        if self.datasets_per_cell < 1:
            raise ConfigError("datasets_per_cell must be >= 1")
        if self.truth_replicates < 1:
            raise ConfigError("truth_replicates must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if self.truth_ties not in TRUTH_TIES:
            raise ConfigError(f"truth_ties must be one of {TRUTH_TIES}")
        try:
            make_scores(self.score_kind, 2)
        except PermSaddleError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_mapping(cls, data: dict) -> "StudyConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"invalid config: {exc}") from None


def load_config(path: str | Path) -> StudyConfig:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    return StudyConfig.from_mapping(data)


def _lambda_label(lam: float) -> int:
    return int(round(lam * 1_000_000))


def generate_dependent_pairs(n: int, lam: float, seed: int) -> PairedSample:
    """One dataset from the shared-noise model; same seed, same sample."""
    if n < 2 or lam < 0:
        raise ValueError("need n >= 2 and lambda >= 0")
    rng = np.random.default_rng(seed)
    xp = rng.logistic(0.0, 1.0, n)
    yp = rng.gumbel(0.0, 1.0, n)
    e = rng.random(n)
    x = xp + lam * e
    y = yp + lam * e
    # ties have probability zero; redraw the own component if they happen
    for arr, draw in ((x, lambda k: rng.logistic(0.0, 1.0, k)), (y, lambda k: rng.gumbel(0.0, 1.0, k))):
        while True:
            _, first, counts = np.unique(arr, return_index=True, return_counts=True)
            if np.all(counts == 1):
                break
            dup = np.setdiff1d(np.arange(n), first)
            arr[dup] = draw(dup.size) + lam * e[dup]
    return PairedSample(x, y)


@dataclass(frozen=True)
class DatasetResult:
    v0: float
    truth: float
    saddlepoint: float | None
    normal: float


@dataclass(frozen=True)
class StudyCell:
    n: int
    lambda_: float
    sad_prop: float
    abs_err_sad: float
    rel_abs_err_sad: float
    abs_err_norm: float
    datasets: int
    failures: int = 0
    results: tuple[DatasetResult, ...] = field(default=(), repr=False, compare=False)

    def row(self) -> dict:
        return {
            "n": self.n,
            "lambda": self.lambda_,
            "sad_prop": self.sad_prop,
            "abs_err_sad": self.abs_err_sad,
            "rel_abs_err_sad": self.rel_abs_err_sad,
            "abs_err_norm": self.abs_err_norm,
            "datasets": self.datasets,
            "failures": self.failures,
        }


def summarize(n: int, lam: float, results: Sequence[DatasetResult], failures: int) -> StudyCell:
    """Aggregate per-dataset p-values into the cell metrics.

    Closeness ties count 1/2 toward ``sad_prop``; datasets whose truth is 0
    are left out of the relative error only.
    """
    ok = [r for r in results if r.saddlepoint is not None]
    if not ok:
        nan = math.nan
        return StudyCell(n, lam, nan, nan, nan, nan, len(results), failures, tuple(results))
    truth = np.array([r.truth for r in ok])
    sad = np.array([r.saddlepoint for r in ok])
    nor = np.array([r.normal for r in ok])
    es, en = np.abs(sad - truth), np.abs(nor - truth)
    closer = np.where(es < en, 1.0, np.where(es == en, 0.5, 0.0))
    pos = truth > 0
    rel = float(np.mean(es[pos] / truth[pos])) if pos.any() else math.nan
    return StudyCell(
        n=n,
        lambda_=lam,
        sad_prop=float(closer.mean()),
        abs_err_sad=float(es.mean()),
        rel_abs_err_sad=rel,
        abs_err_norm=float(en.mean()),
        datasets=len(results),
        failures=failures,
        results=tuple(results),
    )


def run_cell(config: StudyConfig, n: int, lam: float) -> StudyCell:
    scores = make_scores(config.score_kind, n)
    spec = build_spec(scores, scores)
    mid = config.truth_ties == "mid"
    lab = _lambda_label(lam)
    results: list[DatasetResult] = []
    failures = 0
    for idx in range(config.datasets_per_cell):
        data_seed = _rng.derive_key(config.seed, n, lab, idx, 0)
        sample = generate_dependent_pairs(n, lam, data_seed)
        v0 = statistic_value(spec, rank_pairs(sample))
        mc = mc_test(spec, v0, config.truth_replicates, config.seed, n, lab, idx, 1)
        truth = mc.mid_p_value if mid else mc.p_value
        try:
            sad = saddlepoint_pvalue(spec, v0).p_value
        except PermSaddleError:
            sad = None
        if sad is None:
            failures += 1
        results.append(DatasetResult(v0, truth, sad, normal_pvalue(spec, v0)))
    return summarize(n, lam, results, failures)


def run_study(config: StudyConfig) -> list[StudyCell]:
    return [run_cell(config, n, lam) for n in config.sample_sizes for lam in config.lambdas]


def _fmt(x) -> str:
    if isinstance(x, float):
        return "nan" if math.isnan(x) else f"{x:.10g}"
    return str(x)


def cells_to_csv(cells: Sequence[StudyCell]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for cell in cells:
        row = cell.row()
        writer.writerow([_fmt(row[k]) for k in CSV_FIELDS])
    return buf.getvalue()


def format_table(cells: Sequence[StudyCell]) -> str:
    head = f"{'n':>4} {'lambda':>7} {'Sad.Prop':>9} {'AbsErrSad':>10} {'RelAbsErrSad':>13} {'AbsErrNorm':>11} {'fail':>5}"
    lines = [head, "-" * len(head)]
    for c in cells:
        lines.append(
            f"{c.n:>4} {c.lambda_:>7.2f} {c.sad_prop:>9.3f} {c.abs_err_sad:>10.4f} "
            f"{c.rel_abs_err_sad:>13.4f} {c.abs_err_norm:>11.4f} {c.failures:>5}"
        )
    return "\n".join(lines) + "\n"

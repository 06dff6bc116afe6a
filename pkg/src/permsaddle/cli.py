"""``permsaddle`` command line.

Exit codes: 0 success, 2 usage error, 3 invalid input (parse/config/size),
4 tied observations, 5 every requested method failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .errors import InvalidValueError, PermSaddleError
from .independence import ALTERNATIVES, METHODS, independence_test
from .oracles import PValueReport
from .scores import make_scores

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_TIES = 4
EXIT_SOLVER = 5

SCORE_CHOICES = ("spearman", "fisher_yates", "van_der_waerden", "quadrant", "custom")

_TEST_EPILOG = """\
The statistic is V = sum_i a[i] * b[R_i], where R_i is the rank of y for the
pair with the i-th smallest x.  With spearman scores V is V' = sum i*R_i and
the classical D = sum (R_i - i)^2 satisfies D = N(N+1)(2N+1)/3 - 2 V', so
LARGE V' corresponds to SMALL D (positive association).  --alternative
greater reports Pr(V >= v0); less reports Pr(V <= v0).

The JSON report goes to stdout, a short summary to stderr.  exact and
exact_mid (and monte_carlo / monte_carlo_mid) differ in how permutations
with V == v0 are counted: fully, or with weight 1/2.
"""


@dataclass
class TestRequest:
    input_path: Path
    score_kind: str = "spearman"
    score_file: Path | None = None
    methods: tuple[str, ...] = ("saddlepoint", "normal")
    mc_replicates: int = 100_000
    seed: int = 0
    alternative: str = "greater"
    lattice_correction: bool = False


def run_test(request: TestRequest) -> PValueReport:
    from .dataio import read_pairs, read_scores

    sample = read_pairs(request.input_path)
    a = b = None
    if request.score_kind == "custom":
        if request.score_file is None:
            raise InvalidValueError("--scores custom requires --score-file")
        a, b = read_scores(request.score_file)
    report = independence_test(
        sample,
        scores=request.score_kind,
        a_scores=a,
        b_scores=b,
        methods=request.methods,
        mc_replicates=request.mc_replicates,
        seed=request.seed,
        alternative=request.alternative,
        lattice_correction=request.lattice_correction,
    )
    report.inputs["input"] = str(request.input_path)
    return report


def run_simulation(config_path: Path, out_dir: Path) -> list:
    from .simstudy import cells_to_csv, format_table, load_config, run_study

    config = load_config(config_path)
    cells = run_study(config)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "study.csv").write_text(cells_to_csv(cells))
    table = format_table(cells)
    (out_dir / "study.txt").write_text(table)
    sys.stdout.write(table)
    return cells


def _methods(text: str) -> tuple[str, ...]:
    items = tuple(m.strip() for m in text.split(",") if m.strip())
    if "all" in items:
        return METHODS
    bad = [m for m in items if m not in METHODS]
    if not items or bad:
        raise argparse.ArgumentTypeError(f"methods must be a comma list from {', '.join(METHODS)} (or 'all')")
    return items


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="permsaddle",
        description="Saddlepoint p-values for permutation tests of independence.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser(
        "test",
        help="test independence of paired data",
        epilog=_TEST_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    t.add_argument("--input", required=True, type=Path, help="two-column numeric file (x, y)")
    t.add_argument("--scores", default="spearman", choices=SCORE_CHOICES)
    t.add_argument("--score-file", type=Path, help="custom scores: one column (a=b) or two (a, b)")
    t.add_argument("--methods", type=_methods, default=("saddlepoint", "normal"),
                   help="comma list of saddlepoint,exact,mc,normal or 'all' (default: saddlepoint,normal)")
    t.add_argument("--mc-replicates", type=_positive_int, default=100_000)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--alternative", choices=ALTERNATIVES, default="greater")
    t.add_argument("--lattice-correction", action="store_true",
                   help="evaluate the saddlepoint tail half a lattice step below v0")

    s = sub.add_parser("simulate", help="run the saddlepoint vs. normal accuracy study")
    s.add_argument("--config", required=True, type=Path, help="JSON study config")
    s.add_argument("--out", required=True, type=Path, help="output directory")

    sc = sub.add_parser("scores", help="print a score vector, one value per line")
    sc.add_argument("--kind", required=True, choices=SCORE_CHOICES[:-1])
    sc.add_argument("--n", required=True, type=int)
    return parser


def _summary(report: PValueReport) -> str:
    parts = [f"N={report.n} v0={report.v0:g}"]
    for name in ("saddlepoint", "exact", "exact_mid", "monte_carlo", "monte_carlo_mid", "normal"):
        value = getattr(report, name)
        if value is not None:
            parts.append(f"{name}={value:.6g}")
    for name, msg in report.errors.items():
        parts.append(f"{name}: {msg}")
    return "  ".join(parts)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "scores":
            for v in make_scores(args.kind, args.n).values:
                print(f"{v:.12g}")
            return EXIT_OK
        if args.command == "simulate":
            run_simulation(args.config, args.out)
            return EXIT_OK
        request = TestRequest(
            input_path=args.input,
            score_kind=args.scores,
            score_file=args.score_file,
            methods=args.methods,
            mc_replicates=args.mc_replicates,
            seed=args.seed,
            alternative=args.alternative,
            lattice_correction=args.lattice_correction,
        )
        if args.seed < 0:
            raise InvalidValueError("--seed must be non-negative")
        report = run_test(request)
    except PermSaddleError as exc:
        print(f"permsaddle: error: {exc}", file=sys.stderr)
        return exc.exit_code
    json.dump(report.to_dict(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    print(_summary(report), file=sys.stderr)
    if all(getattr(report, m) is None for m in ("saddlepoint", "exact", "monte_carlo", "normal")):
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

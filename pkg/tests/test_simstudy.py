import json
import math

import numpy as np
import pytest

from permsaddle.errors import ConfigError
from permsaddle.oracles import mc_test
from permsaddle.rankstat import build_spec, rank_pairs, spearman_rho, statistic_value
from permsaddle.scores import spearman_scores
from permsaddle.simstudy import (
    CSV_FIELDS,
    DatasetResult,
    StudyConfig,
    cells_to_csv,
    format_table,
    generate_dependent_pairs,
    load_config,
    run_cell,
    run_study,
    summarize,
)


class TestGenerator:
    def test_deterministic(self):
        a = generate_dependent_pairs(12, 0.5, 99)
        b = generate_dependent_pairs(12, 0.5, 99)
        assert np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y)
        c = generate_dependent_pairs(12, 0.5, 100)
        assert not np.array_equal(a.x, c.x)

    def test_no_ties(self):
        for seed in range(50):
            s = generate_dependent_pairs(30, 2.0, seed)
            assert np.unique(s.x).size == 30 and np.unique(s.y).size == 30

    def test_invalid(self):
        with pytest.raises(ValueError):
            generate_dependent_pairs(1, 0.0, 0)
        with pytest.raises(ValueError):
            generate_dependent_pairs(5, -0.1, 0)

    def test_strong_dependence(self):
        rho = [spearman_rho(rank_pairs(generate_dependent_pairs(30, 10.0, s))) for s in range(200)]
        assert np.mean(np.array(rho) > 0.5) >= 0.95

    def test_size_under_independence(self):
        # MC test at level 0.05 over 2000 null datasets
        spec = build_spec(spearman_scores(10), spearman_scores(10))
        rejected = 0
        for s in range(2000):
            v0 = statistic_value(spec, rank_pairs(generate_dependent_pairs(10, 0.0, 10_000 + s)))
            rejected += mc_test(spec, v0, 4000, s).p_value <= 0.05
        assert abs(rejected / 2000 - 0.05) <= 0.02


class TestConfig:
    @pytest.mark.parametrize(
        "bad",
        [
            {"datasets_per_cell": 0},
            {"truth_replicates": 0},
            {"lambdas": [-0.5]},
            {"sample_sizes": [1]},
            {"sample_sizes": []},
            {"score_kind": "kendall"},
            {"truth_ties": "none"},
            {"seed": -3},
            {"unknown_key": 1},
        ],
    )
    def test_rejects(self, bad):
        with pytest.raises(ConfigError):
            StudyConfig.from_mapping(bad)

    def test_load(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text(json.dumps({"sample_sizes": [10], "lambdas": [0, 0.5], "datasets_per_cell": 5}))
        cfg = load_config(p)
        assert cfg.sample_sizes == (10,) and cfg.lambdas == (0.0, 0.5)

    def test_load_bad_json(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text("{\n  'x': 1\n}")
        with pytest.raises(ConfigError, match=r"c.json:2"):
            load_config(p)

    def test_load_missing(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "nope.json")


class TestSummarize:
    def test_metrics(self):
        rs = [
            DatasetResult(0, 0.20, 0.21, 0.25),  # sad closer
            DatasetResult(0, 0.50, 0.40, 0.45),  # normal closer
            DatasetResult(0, 0.50, 0.75, 0.25),  # tie in closeness
        ]
        cell = summarize(10, 0.0, rs, 0)
        assert cell.sad_prop == pytest.approx(0.5)
        assert cell.abs_err_sad == pytest.approx((0.01 + 0.10 + 0.25) / 3)
        assert cell.rel_abs_err_sad == pytest.approx((0.05 + 0.2 + 0.5) / 3)
        assert cell.abs_err_norm == pytest.approx((0.05 + 0.05 + 0.25) / 3)

    def test_failures_excluded(self):
        rs = [DatasetResult(0, 0.2, None, 0.3), DatasetResult(0, 0.2, 0.2, 0.3)]
        cell = summarize(10, 0.0, rs, 1)
        assert cell.failures == 1 and cell.datasets == 2
        assert cell.sad_prop == 1.0

    def test_all_failed(self):
        cell = summarize(10, 0.0, [DatasetResult(0, 0.2, None, 0.3)], 1)
        assert math.isnan(cell.sad_prop)


class TestRunStudy:
    CFG = StudyConfig(sample_sizes=(8,), lambdas=(0.0, 1.0), datasets_per_cell=6, truth_replicates=2000, seed=4)

    def test_deterministic(self):
        assert cells_to_csv(run_study(self.CFG)) == cells_to_csv(run_study(self.CFG))

    def test_cells_are_independent(self):
        # a cell's numbers do not depend on which other cells are run
        alone = run_cell(self.CFG, 8, 1.0)
        both = run_study(self.CFG)[1]
        assert alone == both

    def test_csv_structure(self):
        cells = run_study(self.CFG)
        lines = cells_to_csv(cells).splitlines()
        assert lines[0].split(",") == list(CSV_FIELDS)
        assert len(lines) == 3
        for c in cells:
            assert 0 <= c.sad_prop <= 1
            assert c.abs_err_sad >= 0 and c.abs_err_norm >= 0
        assert len(format_table(cells).splitlines()) == 4

import numpy as np
import pytest

from helpers import NAYAK_X, NAYAK_Y
from permsaddle import PairedSample, build_spec, spearman_scores


@pytest.fixture(scope="session")
def nayak_sample():
    return PairedSample(np.array(NAYAK_X, float), np.array(NAYAK_Y, float))


@pytest.fixture(scope="session")
def spearman15():
    sc = spearman_scores(15)
    return build_spec(sc, sc)


@pytest.fixture
def spearman_spec():
    def make(n):
        sc = spearman_scores(n)
        return build_spec(sc, sc)

    return make


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import numpy as np
import pytest

from qchart.params import ChartParams


@pytest.fixture
def params():
    return ChartParams()


@pytest.fixture
def small():
    # big enough for every interior domain, small enough to be quick
    return ChartParams(n_max=8, k_max=8, l_max=2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

import numpy as np
import pytest

from filtrate import thermo
from filtrate.config import METHANE_EXAMPLE, parse_config
from filtrate.media import MediumLaw
from filtrate.perturb import CorrectionSet
from filtrate.selfsim import SelfSimilarSolution

# Methane example constants; R and n are placeholders chosen here.
Q, ALPHA, C1, C2 = 0.55, 5e-4, 2.7e-3, 3e5
A_VDW, B_VDW = 9e-5, 3e-3
R_METHANE, N_METHANE = 518.28, 6.0

# Sample points (t, x, y, z) where truncation error dominates rounding.
CHECK_POINTS = [(0.5, 0.3, 0.4, 0.9), (2.0, 1.0, 1.5, -0.7)]
# Points for the correction order check: r = 0.88 and 1.0, where the O(a^2)
# residual sits well above the finite-difference floor.
ORDER_POINTS = [(1.0, 0.6, 0.5, 0.4), (1.5, 0.8, 0.6, 0.5)]


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


@pytest.fixture(scope="session")
def methane_config():
    return parse_config(METHANE_EXAMPLE)


@pytest.fixture(scope="session")
def methane():
    return SelfSimilarSolution(Q, C1, C2, R_METHANE, MediumLaw.ratio_power(ALPHA, -1.0),
                               "case2", n=N_METHANE)


@pytest.fixture(scope="session")
def methane_corrections(methane):
    return CorrectionSet(methane, A_VDW, B_VDW)


@pytest.fixture(scope="session")
def methane_vdw():
    return thermo.PotentialModel.van_der_waals(A_VDW, B_VDW, n=N_METHANE, R=R_METHANE)


@pytest.fixture(scope="session")
def methane_spec(methane_config):
    return methane_config.region_spec()


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    lines = test_acceptance.summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

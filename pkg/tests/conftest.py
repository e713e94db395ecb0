import numpy as np
import pytest

from nwp.grid import make_grid
from nwp.scenarios import Case, Constant, ScenarioParams, Sinusoid


@pytest.fixture(scope="session")
def airy_grid():
    """Moderate grid for local (single-time) Airy checks."""
    return make_grid(-40.0, 40.0, 4096)


@pytest.fixture(scope="session")
def wide_grid():
    """Grid wide enough that taper artifacts cannot reach the interior window by t=2."""
    return make_grid(-1024.0, 1024.0, 32768)


@pytest.fixture(scope="session")
def sho_grid():
    return make_grid(-20.0, 20.0, 1024)


@pytest.fixture
def free():
    return ScenarioParams(Case.FREE_AIRY)


@pytest.fixture
def forced_const():
    return ScenarioParams(Case.FORCED_AIRY, force=Constant(1.0))


@pytest.fixture
def forced_sin():
    return ScenarioParams(Case.FORCED_AIRY, force=Sinusoid(1.0, 2.0, 0.0))


@pytest.fixture
def sho1():
    return ScenarioParams(Case.SHO, A=1.0, n=1, theta=0.3)


def max_abs(a):
    return float(np.max(np.abs(a)))


#: criterion number -> (passed, detail), filled by test_acceptance
ACCEPTANCE = {}


def report(number, passed, detail):
    ACCEPTANCE[number] = (bool(passed), detail)
    return bool(passed)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")

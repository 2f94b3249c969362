import numpy as np
import pytest

from cartan_git import CartanBundle, LinearAction, ProjectivePoint, sl_su_pair, torus_pair

ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def sl2_bundle():
    b = CartanBundle(LinearAction(sl_su_pair(2)), ProjectivePoint(np.array([1.0, 0.0])))
    b.certify(100, 0)
    return b


@pytest.fixture(scope="session")
def torus_bundle():
    b = CartanBundle(LinearAction(torus_pair(1), [1, -1]), ProjectivePoint(np.array([1.0, 1.0])))
    b.certify(100, 0)
    return b

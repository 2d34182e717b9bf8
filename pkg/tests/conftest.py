import numpy as np
import pytest

from sendov.constructor import construct_reference
from sendov.poly import spectrum
from sendov.reference import THEOREM_DEGREES, load_reference_table


@pytest.fixture(scope="session")
def reference_table():
    return load_reference_table()


@pytest.fixture(scope="session")
def converged():
    """n -> (published row, Newton-polished candidate) for every listed degree."""
    out = {}
    for n in THEOREM_DEGREES:
        ref, res, params, _ = construct_reference(n)
        assert res.converged, n
        out[n] = (ref, params)
    return out


@pytest.fixture(scope="session")
def cand8(converged):
    return converged[8][1]


@pytest.fixture(scope="session")
def cand9(converged):
    return converged[9][1]


@pytest.fixture(scope="session")
def spec8(cand8):
    return spectrum(cand8)


@pytest.fixture(scope="session")
def spec9(cand9):
    return spectrum(cand9)


@pytest.fixture
def rng():
    return np.random.default_rng(20071)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

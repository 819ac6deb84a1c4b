import pytest

from swapengine.engine import BathPair
from swapengine.priors import PriorSupport
from swapengine.quadrature import QuadratureSpec

TIGHT = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-12)


@pytest.fixture
def baths():
    return BathPair(1.0, 0.5)


@pytest.fixture
def narrow():
    return PriorSupport(0.1, 10.0)


@pytest.fixture
def wide(baths):
    return PriorSupport.asymptotic(baths.t_hot, baths.t_cold)


@pytest.fixture
def tight():
    return TIGHT


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

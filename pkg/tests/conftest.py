import pytest

from lifespan_ph.homology import FilteredComplex
from lifespan_ph.order import IndexUniverse

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def triangle():
    # a=0, b=1, c=2; ab, bc at 1, ca at 2, abc at 3
    return FilteredComplex(4, {(0,): 1, (1,): 1, (2,): 1, (0, 1): 1, (1, 2): 1, (0, 2): 2, (0, 1, 2): 3})


@pytest.fixture
def Z():
    return IndexUniverse.integers()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])

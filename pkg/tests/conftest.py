from pathlib import Path

import pytest

from fatsep.biring import RingSpec
from fatsep.scheme import FatPointScheme

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def P1P1():
    return RingSpec(1, 1)


@pytest.fixture
def P2P3():
    return RingSpec(2, 3)


def fat_point(ring, m, a=(1, 0), b=(1, 0)):
    return FatPointScheme.from_data(ring, [(a, b, m)])


def two_fat_points(ring=None):
    """2P_1 + 2P_2 with P_1 = [1:0:0]x[1:0:0:0], P_2 = [0:0:1]x[0:0:0:1]."""
    ring = ring or RingSpec(2, 3)
    return FatPointScheme.from_data(ring, [((1, 0, 0), (1, 0, 0, 0), 2),
                                           ((0, 0, 1), (0, 0, 0, 1), 2)])


def two_points(ring=None):
    """[1:0]x[1:0] and [1:1]x[1:1]: reduced, not on a common ruling."""
    ring = ring or RingSpec(1, 1)
    return FatPointScheme.from_data(ring, [((1, 0), (1, 0), 1), ((1, 1), (1, 1), 1)])


def grid(ring, xs, ys, mult=1):
    return FatPointScheme.from_data(ring, [((1, a), (1, b), mult) for a in xs for b in ys])


# one summary line per acceptance criterion ------------------------------------

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])

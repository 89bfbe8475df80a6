import math

import pytest

from lifespan_ph.order import (
    IndexUniverse,
    Interval,
    UniverseMismatch,
    bounds_above,
    bounds_below,
    complement,
    contains,
    difference,
    intersection,
    overlaps_above,
    reverse,
)

Z = IndexUniverse.integers()
G4 = IndexUniverse.grid(4)


def iv(lo, hi, u=Z):
    return Interval(lo, hi, u)


def test_universe_extremes():
    assert G4.has_smallest and G4.lowest == 0 and G4.highest == 4
    assert not Z.has_smallest and Z.lowest == -math.inf and Z.highest == math.inf


@pytest.mark.parametrize("lo, hi, u", [(3, 2, Z), (0, 5, G4), (-1, 2, G4), (-math.inf, 2, G4), (math.inf, math.inf, Z)])
def test_invalid_intervals(lo, hi, u):
    with pytest.raises(ValueError):
        Interval(lo, hi, u)


def test_contains():
    assert contains(iv(1, 4), 4)
    assert contains(iv(-math.inf, 5), -100)
    assert not contains(iv(1, 4), 0)


def test_contains_rejects_foreign_index():
    with pytest.raises(ValueError):
        contains(iv(1, 4, G4), 7)


def test_bounds():
    assert bounds_above(iv(3, 8), iv(1, 5))
    assert not bounds_above(iv(0, 2), iv(0, 4))
    assert bounds_above(iv(2, 2), iv(2, 2))
    assert bounds_below(iv(1, 5), iv(3, 8))
    assert not bounds_below(iv(3, 8), iv(1, 5))
    assert bounds_below(iv(-math.inf, 0), iv(-math.inf, 0))


def test_overlaps_above():
    assert overlaps_above(iv(3, 8), iv(1, 5))
    assert not overlaps_above(iv(1, 4), iv(6, 9))
    assert overlaps_above(iv(-math.inf, 3), iv(-math.inf, 3))
    assert not overlaps_above(iv(1, 5), iv(3, 8))


def test_universe_mismatch():
    with pytest.raises(UniverseMismatch):
        overlaps_above(iv(0, 1, G4), iv(0, 1))


def test_intersection_and_difference():
    assert intersection(iv(3, 8), iv(1, 5)) == iv(3, 5)
    assert intersection(iv(1, 2), iv(4, 5)) is None
    assert difference(iv(3, 8), iv(1, 5)) == iv(6, 8)
    assert difference(iv(1, 5), iv(0, 9)) is None
    with pytest.raises(ValueError):
        difference(iv(0, 9), iv(3, 4))


def test_complement_and_reverse():
    assert complement(iv(2, 4, G4)) == iv(0, 1, G4)
    assert complement(iv(0, 4, G4)) is None
    assert complement(iv(3, math.inf)) == iv(-math.inf, 2)
    assert reverse(iv(0, 1, G4)) == iv(3, 4, G4)

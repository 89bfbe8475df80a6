"""Index universes, intervals and the order predicates used by barcodes.

Two universes are supported: a finite grid ``0..N`` and the integers.
Intervals are stored in the normal form ``[lo, hi]`` with inclusive finite
endpoints; ``-inf``/``inf`` mark unbounded sides (integers only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

Bound = Union[int, float]

NEG_INF = -math.inf
POS_INF = math.inf


class UniverseMismatch(ValueError):
    pass


@dataclass(frozen=True)
class IndexUniverse:
    """A totally ordered index set: ``grid`` (positions 0..top) or ``integers``."""

    kind: str
    top: Optional[int] = None

    def __post_init__(self):
        if self.kind == "grid":
            if not isinstance(self.top, int) or self.top < 0:
                raise ValueError(f"grid needs a non-negative top position, got {self.top!r}")
        elif self.kind == "integers":
            if self.top is not None:
                raise ValueError("integers universe takes no top")
        else:
            raise ValueError(f"unknown universe kind {self.kind!r}")

    @classmethod
    def grid(cls, top: int) -> "IndexUniverse":
        return cls("grid", top)

    @classmethod
    def integers(cls) -> "IndexUniverse":
        return cls("integers")

    @property
    def is_grid(self) -> bool:
        return self.kind == "grid"

    @property
    def lowest(self) -> Bound:
        return 0 if self.is_grid else NEG_INF

    @property
    def highest(self) -> Bound:
        return self.top if self.is_grid else POS_INF

    @property
    def has_smallest(self) -> bool:
        return self.is_grid

    @property
    def has_largest(self) -> bool:
        return self.is_grid

    def positions(self) -> range:
        if not self.is_grid:
            raise ValueError("the integers universe is not finite")
        return range(self.top + 1)

    def contains(self, t) -> bool:
        if isinstance(t, bool) or not isinstance(t, int):
            return False
        return not self.is_grid or 0 <= t <= self.top

    def full(self) -> "Interval":
        return Interval(self.lowest, self.highest, self)

    def __str__(self):
        return f"grid {self.top}" if self.is_grid else "integers"


def _check_bound(b, universe: IndexUniverse, side: str) -> Bound:
    if isinstance(b, bool):
        raise TypeError("bounds must be integers or +-inf")
    if isinstance(b, float):
        if b == NEG_INF and side == "lo" or b == POS_INF and side == "hi":
            if universe.is_grid:
                raise ValueError("infinite bounds are not allowed on a finite grid")
            return b
        if b.is_integer():
            return _check_bound(int(b), universe, side)
        raise ValueError(f"invalid {side} bound {b!r}")
    if not isinstance(b, int):
        raise TypeError(f"invalid {side} bound {b!r}")
    if universe.is_grid and not 0 <= b <= universe.top:
        raise ValueError(f"bound {b} outside grid 0..{universe.top}")
    return b


@dataclass(frozen=True, order=False)
class Interval:
    """Nonempty convex subset ``{t | lo <= t <= hi}`` of a universe."""

    lo: Bound
    hi: Bound
    universe: IndexUniverse

    def __post_init__(self):
        object.__setattr__(self, "lo", _check_bound(self.lo, self.universe, "lo"))
        object.__setattr__(self, "hi", _check_bound(self.hi, self.universe, "hi"))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def __contains__(self, t) -> bool:
        return contains(self, t)

    def __iter__(self):
        if math.isinf(self.lo) or math.isinf(self.hi):
            raise ValueError("cannot enumerate an unbounded interval")
        return iter(range(self.lo, self.hi + 1))

    @property
    def key(self):
        return (self.lo, self.hi)

    def __str__(self):
        lo = "-inf" if self.lo == NEG_INF else str(self.lo)
        hi = "inf" if self.hi == POS_INF else str(self.hi)
        return f"[{lo},{hi}]"

    __repr__ = __str__


def _same_universe(*intervals: Interval) -> IndexUniverse:
    u = intervals[0].universe
    for other in intervals[1:]:
        if other.universe != u:
            raise UniverseMismatch(f"{u} != {other.universe}")
    return u


def contains(interval: Interval, t) -> bool:
    if not interval.universe.contains(t):
        raise UniverseMismatch(f"{t!r} is not an element of {interval.universe}")
    return interval.lo <= t <= interval.hi


def bounds_above(i: Interval, j: Interval) -> bool:
    """Every element of ``j`` lies below some element of ``i``."""
    _same_universe(i, j)
    return i.hi >= j.hi


def bounds_below(i: Interval, j: Interval) -> bool:
    _same_universe(i, j)
    return i.lo <= j.lo


def intersection(i: Interval, j: Interval) -> Optional[Interval]:
    u = _same_universe(i, j)
    lo, hi = max(i.lo, j.lo), min(i.hi, j.hi)
    if lo > hi:
        return None
    return Interval(lo, hi, u)


def overlaps_above(i: Interval, j: Interval) -> bool:
    return intersection(i, j) is not None and bounds_above(i, j) and bounds_below(j, i)


def difference(i: Interval, j: Interval) -> Optional[Interval]:
    """``i \\ j`` as an interval, ``None`` when empty.

    Raises ``ValueError`` when the difference is not convex (``j`` strictly
    inside ``i``).
    """
    u = _same_universe(i, j)
    if intersection(i, j) is None:
        return i
    below = i.lo < j.lo
    above = i.hi > j.hi
    if below and above:
        raise ValueError(f"{i} minus {j} is not an interval")
    if below:
        return Interval(i.lo, j.lo - 1, u)
    if above:
        return Interval(j.hi + 1, i.hi, u)
    return None


def is_mortal(i: Interval) -> bool:
    """Strictly bounded above inside its universe."""
    return i.hi < i.universe.highest


def is_nascent(i: Interval) -> bool:
    """Strictly bounded below inside its universe."""
    return i.lo > i.universe.lowest


def complement(i: Interval) -> Optional[Interval]:
    """``T \\ i`` for an interval touching one end of ``T``; ``None`` if ``i == T``."""
    return difference(i.universe.full(), i)


def reverse(i: Interval) -> Interval:
    """Relabel a grid interval under the order reversal ``t -> N - t``."""
    u = i.universe
    if not u.is_grid:
        raise ValueError("order reversal is only implemented on finite grids")
    return Interval(u.top - i.hi, u.top - i.lo, u)

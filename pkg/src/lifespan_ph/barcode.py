"""Barcodes, overlap matchings and the p-exact structure of Barc(T)."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator

from .order import (
    IndexUniverse,
    Interval,
    UniverseMismatch,
    difference,
    intersection,
    overlaps_above,
)


@dataclass(frozen=True)
class Bar:
    interval: Interval
    tag: Hashable

    @property
    def lo(self):
        return self.interval.lo

    @property
    def hi(self):
        return self.interval.hi


@dataclass(frozen=True)
class Barcode:
    """Finite multiset of intervals, each copy distinguished by a tag."""

    universe: IndexUniverse
    bars: tuple[Bar, ...] = ()
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        bars = tuple(self.bars)
        object.__setattr__(self, "bars", bars)
        index = {}
        for bar in bars:
            if bar.interval.universe != self.universe:
                raise UniverseMismatch(f"bar {bar.interval} not over {self.universe}")
            if bar.tag in index:
                raise ValueError(f"duplicate tag {bar.tag!r}")
            index[bar.tag] = bar
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_intervals(cls, universe: IndexUniverse, intervals: Iterable) -> "Barcode":
        """Build a barcode from ``(lo, hi)`` pairs or Intervals, tagged 0, 1, ..."""
        bars = []
        for k, item in enumerate(intervals):
            if not isinstance(item, Interval):
                item = Interval(item[0], item[1], universe)
            bars.append(Bar(item, k))
        return cls(universe, tuple(bars))

    @classmethod
    def empty(cls, universe: IndexUniverse) -> "Barcode":
        return cls(universe, ())

    def __len__(self):
        return len(self.bars)

    def __iter__(self) -> Iterator[Bar]:
        return iter(self.bars)

    def __getitem__(self, tag) -> Bar:
        return self._index[tag]

    def __contains__(self, tag) -> bool:
        return tag in self._index

    @property
    def tags(self) -> list:
        return [b.tag for b in self.bars]

    def multiplicities(self) -> Counter:
        return Counter(b.interval.key for b in self.bars)

    def intervals(self) -> list[tuple]:
        """Sorted ``(lo, hi)`` pairs with repetition."""
        return sorted(b.interval.key for b in self.bars)

    def restrict(self, keep) -> "Barcode":
        """Sub-barcode of bars satisfying ``keep(bar)``; tags are preserved."""
        return Barcode(self.universe, tuple(b for b in self.bars if keep(b)))

    def retagged(self) -> "Barcode":
        """Same intervals, sorted, tagged ``0..n-1``."""
        return Barcode.from_intervals(
            self.universe, [Interval(lo, hi, self.universe) for lo, hi in self.intervals()]
        )

    def disjoint_union(self, other: "Barcode") -> "Barcode":
        if other.universe != self.universe:
            raise UniverseMismatch(f"{self.universe} != {other.universe}")
        bars = [Bar(b.interval, (0, b.tag)) for b in self.bars]
        bars += [Bar(b.interval, (1, b.tag)) for b in other.bars]
        return Barcode(self.universe, tuple(bars))

    def __str__(self):
        return "{" + ", ".join(str(b.interval) for b in sorted(self.bars, key=lambda b: b.interval.key)) + "}"


def are_isomorphic(b1: Barcode, b2: Barcode) -> bool:
    if b1.universe != b2.universe:
        raise UniverseMismatch(f"{b1.universe} != {b2.universe}")
    return b1.multiplicities() == b2.multiplicities()


@dataclass(frozen=True)
class Matching:
    """A partial bijection between the bars of two barcodes (no overlap condition)."""

    source: Barcode
    target: Barcode
    pairs: frozenset = frozenset()

    def __post_init__(self):
        pairs = frozenset(self.pairs)
        object.__setattr__(self, "pairs", pairs)
        seen_src, seen_tgt = set(), set()
        for a, b in pairs:
            if a not in self.source or b not in self.target:
                raise ValueError(f"pair {(a, b)!r} refers to unknown bars")
            if a in seen_src or b in seen_tgt:
                raise ValueError(f"pair {(a, b)!r} breaks the partial bijection")
            seen_src.add(a)
            seen_tgt.add(b)

    def forward(self) -> dict:
        return dict(self.pairs)

    def backward(self) -> dict:
        return {b: a for a, b in self.pairs}

    def is_overlap(self) -> bool:
        return all(
            overlaps_above(self.source[a].interval, self.target[b].interval) for a, b in self.pairs
        )

    def as_overlap(self) -> "OverlapMatching":
        return OverlapMatching(self.source, self.target, self.pairs)


class OverlapMatching(Matching):
    """Morphism of Barc(T): each matched source bar overlaps its partner above."""

    def __post_init__(self):
        super().__post_init__()
        for a, b in self.pairs:
            i, j = self.source[a].interval, self.target[b].interval
            if not overlaps_above(i, j):
                raise ValueError(f"{i} does not overlap {j} above")

    @classmethod
    def identity(cls, barcode: Barcode) -> "OverlapMatching":
        return cls(barcode, barcode, frozenset((t, t) for t in barcode.tags))

    @classmethod
    def zero(cls, source: Barcode, target: Barcode) -> "OverlapMatching":
        return cls(source, target, frozenset())

    @classmethod
    def inclusion(cls, sub: Barcode, whole: Barcode) -> "OverlapMatching":
        """Match the bars of ``sub`` to the bars of ``whole`` with the same tag."""
        return cls(sub, whole, frozenset((t, t) for t in sub.tags))

    @classmethod
    def coinclusion(cls, whole: Barcode, quotient: Barcode) -> "OverlapMatching":
        return cls(whole, quotient, frozenset((t, t) for t in quotient.tags))


def compose(tau: OverlapMatching, sigma: OverlapMatching) -> OverlapMatching:
    """Overlap composition ``tau . sigma``: relational composite, keeping overlapping pairs."""
    if sigma.target != tau.source:
        raise ValueError("middle barcodes differ")
    t = tau.forward()
    pairs = set()
    for a, b in sigma.pairs:
        c = t.get(b)
        if c is None:
            continue
        if overlaps_above(sigma.source[a].interval, tau.target[c].interval):
            pairs.add((a, c))
    return OverlapMatching(sigma.source, tau.target, frozenset(pairs))


def opposite(sigma: Matching) -> Matching:
    return Matching(sigma.target, sigma.source, frozenset((b, a) for a, b in sigma.pairs))


def kernel(sigma: OverlapMatching) -> Barcode:
    fwd = sigma.forward()
    bars = []
    for bar in sigma.source:
        if bar.tag in fwd:
            rest = difference(bar.interval, sigma.target[fwd[bar.tag]].interval)
            if rest is not None:
                bars.append(Bar(rest, bar.tag))
        else:
            bars.append(bar)
    return Barcode(sigma.source.universe, tuple(bars))


def cokernel(sigma: OverlapMatching) -> Barcode:
    bwd = sigma.backward()
    bars = []
    for bar in sigma.target:
        if bar.tag in bwd:
            rest = difference(bar.interval, sigma.source[bwd[bar.tag]].interval)
            if rest is not None:
                bars.append(Bar(rest, bar.tag))
        else:
            bars.append(bar)
    return Barcode(sigma.target.universe, tuple(bars))


def _overlaps(sigma: OverlapMatching, use_target_tag: bool) -> Barcode:
    bars = []
    for a, b in sigma.pairs:
        shared = intersection(sigma.source[a].interval, sigma.target[b].interval)
        bars.append(Bar(shared, b if use_target_tag else a))
    bars.sort(key=lambda bar: (bar.interval.key, repr(bar.tag)))
    return Barcode(sigma.source.universe, tuple(bars))


def image(sigma: OverlapMatching) -> Barcode:
    return _overlaps(sigma, use_target_tag=True)


def coimage(sigma: OverlapMatching) -> Barcode:
    return _overlaps(sigma, use_target_tag=False)


def is_mono(sigma: OverlapMatching) -> bool:
    return len(kernel(sigma)) == 0


def is_epi(sigma: OverlapMatching) -> bool:
    return len(cokernel(sigma)) == 0


def is_split(sigma: OverlapMatching) -> bool:
    """Split criterion for a mono or epi overlap matching."""
    if not (is_mono(sigma) or is_epi(sigma)):
        raise ValueError("is_split needs a mono or epi overlap matching")
    return all(sigma.source[a].interval == sigma.target[b].interval for a, b in sigma.pairs)


def is_exact(sigma: OverlapMatching, tau: OverlapMatching) -> bool:
    """Exactness of ``A -sigma-> B -tau-> C`` at ``B``: im sigma equals ker tau as sub-barcodes."""
    if sigma.target != tau.source:
        raise ValueError("middle barcodes differ")
    im = {(b.tag, b.interval) for b in image(sigma)}
    ker = {(b.tag, b.interval) for b in kernel(tau)}
    return im == ker


def is_short_exact(sigma: OverlapMatching, tau: OverlapMatching) -> bool:
    return is_mono(sigma) and is_epi(tau) and is_exact(sigma, tau)

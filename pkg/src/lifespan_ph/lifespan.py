"""Lifespan functors and the unborn/ghost complements on barcodes."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .barcode import Bar, Barcode, OverlapMatching, is_split, is_short_exact
from .order import Interval, complement as interval_complement, is_mortal, is_nascent


class LifespanFunctor(enum.Enum):
    MORTAL = "mortal"
    IMMORTAL = "immortal"
    NASCENT = "nascent"
    ANCIENT = "ancient"
    FINITE = "finite"
    CONSTANT = "constant"
    ANCIENT_MORTAL = "ancient-mortal"
    IMMORTAL_NASCENT = "immortal-nascent"

    @property
    def dual(self) -> "LifespanFunctor":
        """The functor with the same effect on intervals after order reversal."""
        return _DUAL[self]


_DUAL = {
    LifespanFunctor.MORTAL: LifespanFunctor.NASCENT,
    LifespanFunctor.NASCENT: LifespanFunctor.MORTAL,
    LifespanFunctor.ANCIENT: LifespanFunctor.IMMORTAL,
    LifespanFunctor.IMMORTAL: LifespanFunctor.ANCIENT,
    LifespanFunctor.ANCIENT_MORTAL: LifespanFunctor.IMMORTAL_NASCENT,
    LifespanFunctor.IMMORTAL_NASCENT: LifespanFunctor.ANCIENT_MORTAL,
    LifespanFunctor.FINITE: LifespanFunctor.FINITE,
    LifespanFunctor.CONSTANT: LifespanFunctor.CONSTANT,
}


class Complement(enum.Enum):
    UNBORN = "unborn"
    GHOST = "ghost"

    @property
    def dual(self) -> "Complement":
        return Complement.GHOST if self is Complement.UNBORN else Complement.UNBORN


def classify(interval: Interval) -> frozenset:
    mortal = is_mortal(interval)
    nascent = is_nascent(interval)
    out = {LifespanFunctor.MORTAL if mortal else LifespanFunctor.IMMORTAL}
    out.add(LifespanFunctor.NASCENT if nascent else LifespanFunctor.ANCIENT)
    if mortal and nascent:
        out.add(LifespanFunctor.FINITE)
    elif mortal:
        out.add(LifespanFunctor.ANCIENT_MORTAL)
    elif nascent:
        out.add(LifespanFunctor.IMMORTAL_NASCENT)
    else:
        out.add(LifespanFunctor.CONSTANT)
    return frozenset(out)


def part(barcode: Barcode, functor: LifespanFunctor) -> Barcode:
    return barcode.restrict(lambda bar: functor in classify(bar.interval))


def complement(barcode: Barcode, which: Complement) -> Barcode:
    """Unborn: ``T \\ I`` for immortal ``I != T``; ghost: the same for ancient ``I``."""
    universe = barcode.universe
    if which is Complement.GHOST and not universe.has_smallest:
        raise ValueError("the ghost complement needs a universe with a smallest element")
    bars = []
    for bar in barcode:
        i = bar.interval
        if i == universe.full():
            continue
        if which is Complement.UNBORN and not is_mortal(i) or which is Complement.GHOST and not is_nascent(i):
            bars.append(Bar(interval_complement(i), bar.tag))
    return Barcode(universe, tuple(bars))


def is_projective(barcode: Barcode) -> bool:
    return len(part(barcode, LifespanFunctor.MORTAL)) == 0


def is_injective(barcode: Barcode) -> bool:
    return len(part(barcode, LifespanFunctor.NASCENT)) == 0


# (source, target, kind) for every arrow of the lifespan diagram; None is the barcode itself.
_F = LifespanFunctor
DIAGRAM_ARROWS = (
    (_F.ANCIENT_MORTAL, _F.MORTAL, "mono"),
    (_F.ANCIENT_MORTAL, _F.ANCIENT, "mono"),
    (_F.MORTAL, _F.FINITE, "epi"),
    (_F.MORTAL, None, "mono"),
    (_F.ANCIENT, None, "mono"),
    (_F.ANCIENT, _F.CONSTANT, "epi"),
    (None, _F.NASCENT, "epi"),
    (None, _F.IMMORTAL, "epi"),
    (_F.FINITE, _F.NASCENT, "mono"),
    (_F.CONSTANT, _F.IMMORTAL, "mono"),
    (_F.NASCENT, _F.IMMORTAL_NASCENT, "epi"),
    (_F.IMMORTAL, _F.IMMORTAL_NASCENT, "epi"),
)

# The six short exact sequences (mono, epi) of the diagram.
SHORT_EXACT = (
    ((_F.MORTAL, None), (None, _F.IMMORTAL)),
    ((_F.ANCIENT, None), (None, _F.NASCENT)),
    ((_F.ANCIENT_MORTAL, _F.MORTAL), (_F.MORTAL, _F.FINITE)),
    ((_F.ANCIENT_MORTAL, _F.ANCIENT), (_F.ANCIENT, _F.CONSTANT)),
    ((_F.FINITE, _F.NASCENT), (_F.NASCENT, _F.IMMORTAL_NASCENT)),
    ((_F.CONSTANT, _F.IMMORTAL), (_F.IMMORTAL, _F.IMMORTAL_NASCENT)),
)


@dataclass(frozen=True)
class LifespanDiagram:
    barcode: Barcode
    parts: dict
    arrows: dict  # (source, target) -> OverlapMatching

    def node(self, key) -> Barcode:
        return self.barcode if key is None else self.parts[key]

    def short_exact_sequences(self):
        for mono, epi in SHORT_EXACT:
            yield self.arrows[mono], self.arrows[epi]

    def all_split_exact(self) -> bool:
        return all(
            is_short_exact(s, t) and is_split(s) and is_split(t)
            for s, t in self.short_exact_sequences()
        )


def lifespan_diagram(barcode: Barcode) -> LifespanDiagram:
    parts = {f: part(barcode, f) for f in LifespanFunctor}
    node = lambda key: barcode if key is None else parts[key]
    arrows = {}
    for src, tgt, kind in DIAGRAM_ARROWS:
        a, b = node(src), node(tgt)
        if kind == "mono":
            arrows[src, tgt] = OverlapMatching.inclusion(a, b)
        else:
            arrows[src, tgt] = OverlapMatching.coinclusion(a, b)
    return LifespanDiagram(barcode, parts, arrows)

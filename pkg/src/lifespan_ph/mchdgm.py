"""Matching diagrams on a finite grid and the functors to barcodes and modules.

A diagram stores one ordered element tuple per grid position and one
matching (set of pairs) per consecutive step; longer composites are folded
on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from . import fp
from .barcode import Bar, Barcode, OverlapMatching
from .lifespan import LifespanFunctor, classify
from .order import IndexUniverse, Interval
from .pmod import ModuleMorphism, PersistenceModule


def compose_matchings(second: frozenset, first: frozenset) -> frozenset:
    """Relational composite ``second . first`` of two partial bijections."""
    fwd = dict(second)
    return frozenset((a, fwd[b]) for a, b in first if b in fwd)


def _check_matching(pairs, src, tgt, where):
    seen_a, seen_b = set(), set()
    for a, b in pairs:
        if a not in src or b not in tgt:
            raise ValueError(f"{where}: pair {(a, b)!r} refers to unknown elements")
        if a in seen_a or b in seen_b:
            raise ValueError(f"{where}: {(a, b)!r} breaks the partial bijection")
        seen_a.add(a)
        seen_b.add(b)


@dataclass(frozen=True, eq=False)
class MatchingDiagram:
    sets: tuple[tuple, ...]
    steps: tuple[frozenset, ...]

    def __post_init__(self):
        sets = tuple(tuple(s) for s in self.sets)
        steps = tuple(frozenset(s) for s in self.steps)
        if not sets:
            raise ValueError("a diagram needs at least one position")
        if len(steps) != len(sets) - 1:
            raise ValueError("one matching per consecutive pair of positions is required")
        for t, s in enumerate(sets):
            if len(set(s)) != len(s):
                raise ValueError(f"repeated element at position {t}")
        for t, m in enumerate(steps):
            _check_matching(m, set(sets[t]), set(sets[t + 1]), f"step {t}")
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "steps", steps)

    @property
    def top(self) -> int:
        return len(self.sets) - 1

    @property
    def universe(self) -> IndexUniverse:
        return IndexUniverse.grid(self.top)

    def composite(self, t: int, u: int) -> frozenset:
        m = frozenset((x, x) for x in self.sets[t])
        for k in range(t, u):
            m = compose_matchings(self.steps[k], m)
        return m


@dataclass(frozen=True)
class Component:
    members: tuple  # ((t, element), ...) in increasing t
    support: Interval

    @property
    def key(self):
        return self.members[0]

    def at(self, t):
        for s, x in self.members:
            if s == t:
                return x
        return None


def components(d: MatchingDiagram) -> list[Component]:
    """Maximal chains of matched elements, ordered by (start, position in the start set)."""
    u = d.universe
    matched_into = [set(b for _, b in step) for step in d.steps]
    out = []
    for t, elems in enumerate(d.sets):
        for x in elems:
            if t > 0 and x in matched_into[t - 1]:
                continue
            members = [(t, x)]
            s, y = t, x
            while s < d.top:
                nxt = dict(d.steps[s]).get(y)
                if nxt is None:
                    break
                s, y = s + 1, nxt
                members.append((s, y))
            out.append(Component(tuple(members), Interval(t, s, u)))
    return out


def limit(d: MatchingDiagram) -> tuple[list[Component], list[frozenset]]:
    """Components alive at position 0, with the matchings ``lim D -> D_t``."""
    lim = [c for c in components(d) if c.support.lo == 0]
    maps = [frozenset((c.key, c.at(t)) for c in lim if c.at(t) is not None) for t in range(d.top + 1)]
    return lim, maps


def colimit(d: MatchingDiagram) -> tuple[list[Component], list[frozenset]]:
    """Components alive at the top position, with the matchings ``D_t -> colim D``."""
    colim = [c for c in components(d) if c.support.hi == d.top]
    maps = [frozenset((c.at(t), c.key) for c in colim if c.at(t) is not None) for t in range(d.top + 1)]
    return colim, maps


@dataclass(frozen=True, eq=False)
class DiagramMorphism:
    source: MatchingDiagram
    target: MatchingDiagram
    levels: tuple[frozenset, ...]

    def __post_init__(self):
        levels = tuple(frozenset(m) for m in self.levels)
        object.__setattr__(self, "levels", levels)
        s, t = self.source, self.target
        if s.top != t.top or len(levels) != s.top + 1:
            raise ValueError("diagrams live on different grids")
        for k, m in enumerate(levels):
            _check_matching(m, set(s.sets[k]), set(t.sets[k]), f"level {k}")
        if not self.is_natural():
            raise ValueError("levels do not commute with the structure matchings")

    def is_natural(self) -> bool:
        s, t = self.source, self.target
        for i in range(s.top + 1):
            for j in range(i, s.top + 1):
                lhs = compose_matchings(t.composite(i, j), self.levels[i])
                rhs = compose_matchings(self.levels[j], s.composite(i, j))
                if lhs != rhs:
                    return False
        return True


def identity_diagram_morphism(d: MatchingDiagram) -> DiagramMorphism:
    return DiagramMorphism(d, d, tuple(frozenset((x, x) for x in s) for s in d.sets))


def to_barcode(d: MatchingDiagram) -> Barcode:
    """One bar per component, tagged by the component's first member."""
    return Barcode(d.universe, tuple(Bar(c.support, c.key) for c in components(d)))


def to_barcode_morphism(psi: DiagramMorphism) -> OverlapMatching:
    src, tgt = to_barcode(psi.source), to_barcode(psi.target)
    comps_s, comps_t = components(psi.source), components(psi.target)
    owner_t = {(t, x): c for c in comps_t for t, x in c.members}
    pairs = set()
    for q in comps_s:
        # candidate partners are the components hit by q's members
        candidates = set()
        for t, x in q.members:
            for a, b in psi.levels[t]:
                if a == x:
                    candidates.add(owner_t[t, b].key)
        for key in candidates:
            r = next(c for c in comps_t if c.key == key)
            lo, hi = max(q.support.lo, r.support.lo), min(q.support.hi, r.support.hi)
            if lo > hi:
                continue
            if all((q.at(t), r.at(t)) in psi.levels[t] for t in range(lo, hi + 1)):
                pairs.add((q.key, r.key))
    return OverlapMatching(src, tgt, frozenset(pairs))


def from_barcode(barcode: Barcode) -> MatchingDiagram:
    """Position ``t`` holds the tags of bars containing ``t``; equal tags are matched."""
    u = barcode.universe
    if not u.is_grid:
        raise ValueError("matching diagrams are only built over finite grids")
    sets = [tuple(b.tag for b in barcode if b.lo <= t <= b.hi) for t in u.positions()]
    steps = [frozenset((x, x) for x in sets[t] if x in set(sets[t + 1])) for t in range(u.top)]
    return MatchingDiagram(tuple(sets), tuple(steps))


def from_barcode_morphism(sigma: OverlapMatching) -> DiagramMorphism:
    src, tgt = from_barcode(sigma.source), from_barcode(sigma.target)
    levels = []
    for t in sigma.source.universe.positions():
        levels.append(frozenset(
            (a, b) for a, b in sigma.pairs
            if t in sigma.source[a].interval and t in sigma.target[b].interval
        ))
    return DiagramMorphism(src, tgt, tuple(levels))


def to_module(d: MatchingDiagram, p: int = 2) -> PersistenceModule:
    """Free vector spaces on the sets; matched elements map to their partners, others to 0."""
    steps = []
    for t, m in enumerate(d.steps):
        pos = {x: k for k, x in enumerate(d.sets[t + 1])}
        a = fp.zeros(len(d.sets[t + 1]), len(d.sets[t]))
        fwd = dict(m)
        for k, x in enumerate(d.sets[t]):
            if x in fwd:
                a[pos[fwd[x]], k] = 1
        steps.append(a)
    return PersistenceModule(tuple(len(s) for s in d.sets), tuple(steps), p)


def _matching_matrix(pairs, src: Sequence, tgt: Sequence) -> np.ndarray:
    pos = {x: k for k, x in enumerate(tgt)}
    a = fp.zeros(len(tgt), len(src))
    fwd = dict(pairs)
    for k, x in enumerate(src):
        if x in fwd:
            a[pos[fwd[x]], k] = 1
    return a


def to_module_morphism(psi: DiagramMorphism, p: int = 2) -> ModuleMorphism:
    levels = tuple(
        _matching_matrix(m, psi.source.sets[t], psi.target.sets[t]) for t, m in enumerate(psi.levels)
    )
    return ModuleMorphism(to_module(psi.source, p), to_module(psi.target, p), levels)


def diagram_lifespan_part(d: MatchingDiagram, functor: LifespanFunctor) -> MatchingDiagram:
    """Sub-diagram of the components whose support lies in the functor's interval class."""
    keep = set()
    for c in components(d):
        if functor in classify(c.support):
            keep.update(c.members)
    sets = tuple(tuple(x for x in s if (t, x) in keep) for t, s in enumerate(d.sets))
    steps = tuple(frozenset((a, b) for a, b in m if (t, a) in keep) for t, m in enumerate(d.steps))
    return MatchingDiagram(sets, steps)


def is_exact_at(first: DiagramMorphism, second: DiagramMorphism) -> bool:
    """Pointwise exactness ``im first_t == ker second_t`` in the category of matchings."""
    for t in range(first.source.top + 1):
        im = {b for _, b in first.levels[t]}
        ker = set(first.target.sets[t]) - {a for a, _ in second.levels[t]}
        if im != ker:
            return False
    return True


def colimit_matching(psi: DiagramMorphism) -> frozenset:
    """The matching ``colim D -> colim D'`` induced by a diagram morphism."""
    top = psi.source.top
    src, _ = colimit(psi.source)
    tgt, _ = colimit(psi.target)
    owner = {c.at(top): c.key for c in tgt}
    return frozenset((c.key, owner[b]) for c in src for a, b in psi.levels[top] if a == c.at(top))


def limit_matching(psi: DiagramMorphism) -> frozenset:
    src, _ = limit(psi.source)
    tgt, _ = limit(psi.target)
    owner = {c.at(0): c.key for c in tgt}
    return frozenset(
        (c.key, owner[b]) for c in src for a, b in psi.levels[0] if a == c.at(0) and b in owner
    )


def matching_exact(first: frozenset, second: frozenset, middle) -> bool:
    im = {b for _, b in first}
    ker = set(middle) - {a for a, _ in second}
    return im == ker

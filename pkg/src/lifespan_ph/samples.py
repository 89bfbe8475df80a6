"""Seeded generators: Vietoris-Rips filtrations and random test corpora.

Every generator takes a ``numpy.random.Generator`` so corpora are
reproducible from a single seed.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from . import fp
from .barcode import Bar, Barcode, OverlapMatching
from .homology import FilteredComplex, cone, faces
from .mchdgm import MatchingDiagram
from .order import IndexUniverse, Interval, overlaps_above
from .pmod import ModuleMorphism, PersistenceModule, barcode_module

PRIMES = (2, 3, 5)


# ------------------------------------------------------------ Vietoris-Rips


def round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def vietoris_rips(points, threshold: float, max_dim: int, top: int, cap: bool = False) -> FilteredComplex:
    """Clique complex of the ``threshold``-neighbourhood graph, grades quantized to ``1..top``.

    A simplex of diameter ``r`` gets grade ``1 + round_half_up(r / threshold * (top - 1))``;
    ``cap`` cones the whole complex off at the top grade.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or len(pts) == 0:
        raise ValueError("at least one point is required")
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    if top < 1:
        raise ValueError("the grid needs at least one positive position")
    n = len(pts)
    dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=-1))

    def grade(r: float) -> int:
        return 1 + round_half_up(r / threshold * (top - 1))

    grades = {(v,): 1 for v in range(n)}
    adjacent = {v: {w for w in range(n) if w != v and dist[v, w] <= threshold} for v in range(n)}
    layer = [(v,) for v in range(n)]
    for _ in range(max_dim):
        nxt = []
        for s in layer:
            for w in sorted(adjacent[s[-1]]):
                if w > s[-1] and all(w in adjacent[v] for v in s):
                    t = s + (w,)
                    diam = max(dist[a, b] for a, b in itertools.combinations(t, 2))
                    grades[t] = grade(diam)
                    nxt.append(t)
        layer = nxt
    x = FilteredComplex(top, grades)
    return cone(x) if cap else x


def parse_points(text: str) -> np.ndarray:
    rows = []
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if not body:
            continue
        try:
            rows.append([float(v) for v in body])
        except ValueError:
            raise ValueError(f"line {n}: coordinates must be numbers") from None
    if not rows:
        raise ValueError("no points given")
    if len({len(r) for r in rows}) != 1:
        raise ValueError("points have different dimensions")
    return np.array(rows)


def random_points(rng: np.random.Generator, n: int, dim: int = 2) -> np.ndarray:
    return rng.random((n, dim))


# ------------------------------------------------------------- filtrations


def random_complex(rng: np.random.Generator, max_simplices: int = 150, max_dim: int = 3, top: int | None = None) -> FilteredComplex:
    """Closure of random simplices, grades drawn so faces never come later."""
    top = int(rng.integers(2, 13)) if top is None else top
    n_vertices = int(rng.integers(1, 13))
    simplices = {(v,) for v in range(n_vertices)}
    for _ in range(int(rng.integers(0, 40))):
        k = int(rng.integers(1, max_dim + 1))
        if k + 1 > n_vertices:
            continue
        s = tuple(sorted(rng.choice(n_vertices, size=k + 1, replace=False).tolist()))
        closure = {c for r in range(1, len(s) + 1) for c in itertools.combinations(s, r)}
        if len(simplices | closure) > max_simplices:
            break
        simplices |= closure
    grades = {}
    for s in sorted(simplices, key=len):
        floor = max((grades[f] for f in faces(s)), default=1)
        # bias towards ties so equal-grade tiebreaks are exercised
        grades[s] = floor if rng.random() < 0.3 else int(rng.integers(floor, top + 1))
    return FilteredComplex(top, grades)


def random_vr(rng: np.random.Generator, max_simplices: int = 150, max_dim: int = 3, top: int | None = None) -> FilteredComplex:
    top = int(rng.integers(2, 13)) if top is None else top
    while True:
        n = int(rng.integers(1, 13))
        pts = random_points(rng, n)
        x = vietoris_rips(pts, float(rng.uniform(0.2, 0.9)), int(rng.integers(1, max_dim + 1)), top)
        if len(x) <= max_simplices:
            return x


def random_filtration(rng: np.random.Generator, **kw) -> FilteredComplex:
    return random_complex(rng, **kw) if rng.random() < 0.5 else random_vr(rng, **kw)


def filtration_corpus(seed: int, count: int):
    """``(complex, prime)`` pairs covering primes 2, 3 and 5 in turn."""
    rng = np.random.default_rng(seed)
    return [(random_filtration(rng), PRIMES[k % len(PRIMES)]) for k in range(count)]


def random_subfiltration(rng: np.random.Generator, k: FilteredComplex) -> FilteredComplex:
    """A subcomplex of ``k`` with grades raised at random (still closed)."""
    keep = {}
    for s in sorted(k.grades, key=len):
        if any(f not in keep for f in faces(s)) or (len(s) > 1 and rng.random() < 0.25):
            continue
        floor = max([k.grades[s]] + [keep[f] for f in faces(s)])
        keep[s] = floor if rng.random() < 0.6 else int(rng.integers(floor, k.top + 1))
    return FilteredComplex(k.top, keep)


def random_capped_pair(rng: np.random.Generator, max_simplices: int = 150):
    """Inclusion ``L -> K`` with both tops coned off at the top grade.

    Cones make the top homology that of a point on both sides, so the map at
    the top grade is an isomorphism in every degree.
    """
    while True:
        top = int(rng.integers(2, 11))
        base = random_filtration(rng, max_simplices=max_simplices // 3, max_dim=2, top=top)
        sub = random_subfiltration(rng, base)
        apex = max(base.vertices) + 1
        big, small = cone(base, apex), cone(sub, apex)
        if len(big) <= max_simplices:
            return small, big


def random_inclusion_pair(rng: np.random.Generator, max_simplices: int = 150):
    top = int(rng.integers(2, 11))
    base = random_filtration(rng, max_simplices=max_simplices, top=top)
    return random_subfiltration(rng, base), base


# ----------------------------------------------------------------- barcodes


def random_barcode(rng: np.random.Generator, top: int | None = None, max_bars: int = 8) -> Barcode:
    top = int(rng.integers(1, 9)) if top is None else top
    u = IndexUniverse.grid(top)
    bars = []
    for _ in range(int(rng.integers(0, max_bars + 1))):
        lo, hi = sorted(rng.integers(0, top + 1, size=2).tolist())
        # endpoints at the extremes are common so every lifespan class shows up
        if rng.random() < 0.3:
            lo = 0
        if rng.random() < 0.3:
            hi = top
        bars.append(Interval(lo, hi, u))
    return Barcode.from_intervals(u, bars)


def random_integer_barcode(rng: np.random.Generator, max_bars: int = 8) -> Barcode:
    u = IndexUniverse.integers()
    bars = []
    for _ in range(int(rng.integers(0, max_bars + 1))):
        lo, hi = sorted(rng.integers(-5, 6, size=2).tolist())
        bars.append(Interval(-math.inf if rng.random() < 0.3 else lo, math.inf if rng.random() < 0.3 else hi, u))
    return Barcode.from_intervals(u, bars)


def random_overlap_matching(rng: np.random.Generator, source: Barcode, target: Barcode, density: float = 0.7) -> OverlapMatching:
    pairs = []
    free = set(target.tags)
    for bar in source:
        options = sorted(t for t in free if overlaps_above(bar.interval, target[t].interval))
        if options and rng.random() < density:
            pick = options[int(rng.integers(len(options)))]
            pairs.append((bar.tag, pick))
            free.discard(pick)
    return OverlapMatching(source, target, frozenset(pairs))


def random_composable(rng: np.random.Generator, top: int | None = None):
    top = int(rng.integers(1, 7)) if top is None else top
    a, b, c = (random_barcode(rng, top) for _ in range(3))
    return random_overlap_matching(rng, a, b), random_overlap_matching(rng, b, c)


def random_diagram(rng: np.random.Generator, top: int | None = None, max_size: int = 5) -> MatchingDiagram:
    top = int(rng.integers(1, 7)) if top is None else top
    sets = []
    for t in range(top + 1):
        sets.append(tuple(f"x{t}_{k}" for k in range(int(rng.integers(0, max_size + 1)))))
    steps = []
    for t in range(top):
        src, tgt = list(sets[t]), list(rng.permutation(list(sets[t + 1])) if sets[t + 1] else [])
        pairs = [(a, b) for a, b in zip(src, tgt) if rng.random() < 0.7]
        steps.append(frozenset(pairs))
    return MatchingDiagram(tuple(sets), tuple(steps))


# ------------------------------------------------------------------ modules


def conjugate(m: PersistenceModule, rng: np.random.Generator) -> tuple[PersistenceModule, list[np.ndarray]]:
    """``m`` in random bases; returns the new module and the base changes ``P_t``."""
    p = m.p
    ps = [fp.random_invertible(d, p, rng) for d in m.dims]
    inv = [fp.invert(a, p) for a in ps]
    steps = tuple(fp.matmul(fp.matmul(ps[t + 1], a, p), inv[t], p) for t, a in enumerate(m.steps))
    return PersistenceModule(m.dims, steps, p), ps


def random_module(rng: np.random.Generator, p: int | None = None, top: int | None = None) -> PersistenceModule:
    p = PRIMES[int(rng.integers(len(PRIMES)))] if p is None else p
    return conjugate(barcode_module(random_barcode(rng, top), p), rng)[0]


def _alive(barcode: Barcode, t: int) -> dict:
    return {b.tag: k for k, b in enumerate(b for b in barcode if b.lo <= t <= b.hi)}


def combination_morphism(source: Barcode, target: Barcode, coeffs: dict, p: int) -> ModuleMorphism:
    """``sum c * (canonical map C(I_a) -> C(J_b))`` over ``coeffs[(a, b)] = c`` between barcode modules."""
    levels = []
    for t in source.universe.positions():
        sa, ta = _alive(source, t), _alive(target, t)
        a = fp.zeros(len(ta), len(sa))
        for (i, j), c in coeffs.items():
            if i in sa and j in ta:
                a[ta[j], sa[i]] = (a[ta[j], sa[i]] + c) % p
        levels.append(a)
    return ModuleMorphism(barcode_module(source, p), barcode_module(target, p), tuple(levels))


def _unipotent(rng: np.random.Generator, barcode: Barcode, p: int) -> dict:
    """Identity plus a strictly triangular mix of canonical maps: an automorphism of ``M(B)``."""
    coeffs = {(b.tag, b.tag): 1 for b in barcode}
    bars = list(barcode)
    for x, y in itertools.permutations(range(len(bars)), 2):
        if x < y and overlaps_above(bars[x].interval, bars[y].interval) and rng.random() < 0.4:
            coeffs[bars[x].tag, bars[y].tag] = int(rng.integers(1, p))
    return coeffs


def _sandwich(rng, phi_coeffs: dict, source: Barcode, target: Barcode, p: int) -> ModuleMorphism:
    auto_s = combination_morphism(source, source, _unipotent(rng, source, p), p)
    auto_t = combination_morphism(target, target, _unipotent(rng, target, p), p)
    core = combination_morphism(source, target, phi_coeffs, p)
    levels = tuple(
        fp.matmul(fp.matmul(b, c, p), a, p) for a, c, b in zip(auto_s.levels, core.levels, auto_t.levels)
    )
    m_s, ps = conjugate(barcode_module(source, p), rng)
    m_t, qs = conjugate(barcode_module(target, p), rng)
    levels = tuple(fp.matmul(fp.matmul(q, a, p), fp.invert(pp, p), p) for a, pp, q in zip(levels, ps, qs))
    return ModuleMorphism(m_s, m_t, levels)


def random_morphism(rng: np.random.Generator, p: int | None = None, top: int | None = None, mode: str = "any") -> ModuleMorphism:
    """Random module morphism; ``mode`` ``mono-colim`` or ``epi-lim`` forces that hypothesis.

    Built as automorphism . M(matching) . automorphism between barcode
    modules, then written in random bases.
    """
    p = PRIMES[int(rng.integers(len(PRIMES)))] if p is None else p
    top = int(rng.integers(1, 7)) if top is None else top
    u = IndexUniverse.grid(top)
    source, target = random_barcode(rng, top), random_barcode(rng, top)
    sigma = random_overlap_matching(rng, source, target)
    pairs = set(sigma.pairs)
    if mode == "mono-colim":
        # every immortal source bar needs an immortal partner starting no later
        pairs = {(a, b) for a, b in pairs if source[a].hi < top or target[b].hi == top}
        extra = []
        matched = {a for a, _ in pairs}
        for bar in source:
            if bar.hi == top and bar.tag not in matched:
                extra.append((bar.tag, Interval(int(rng.integers(0, bar.lo + 1)), top, u)))
        target, pairs = _extend_target(target, extra, pairs)
    elif mode == "epi-lim":
        # every ancient target bar needs an ancient source partner ending no earlier
        pairs = {(a, b) for a, b in pairs if target[b].lo > 0 or source[a].lo == 0}
        extra = []
        hit = {b for _, b in pairs}
        for bar in target:
            if bar.lo == 0 and bar.tag not in hit:
                extra.append((bar.tag, Interval(0, int(rng.integers(bar.hi, top + 1)), u)))
        source, pairs = _extend_source(source, extra, pairs)
    coeffs = {pair: int(rng.integers(1, p)) for pair in pairs}
    return _sandwich(rng, coeffs, source, target, p)


def _extend_target(target: Barcode, extra, pairs):
    bars = list(target)
    n = len(bars)
    pairs = set(pairs)
    for k, (src_tag, interval) in enumerate(extra):
        bars.append(Bar(interval, n + k))
        pairs.add((src_tag, n + k))
    return Barcode(target.universe, tuple(bars)), pairs


def _extend_source(source: Barcode, extra, pairs):
    bars = list(source)
    n = len(bars)
    pairs = set(pairs)
    for k, (tgt_tag, interval) in enumerate(extra):
        bars.append(Bar(interval, n + k))
        pairs.add((n + k, tgt_tag))
    return Barcode(source.universe, tuple(bars)), pairs

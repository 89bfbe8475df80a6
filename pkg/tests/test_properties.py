"""Property-based checks driven by hypothesis."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from lifespan_ph import barcode as bc
from lifespan_ph import mchdgm
from lifespan_ph.barcode import Barcode, OverlapMatching
from lifespan_ph.lifespan import LifespanFunctor, classify, part
from lifespan_ph.order import IndexUniverse, Interval, overlaps_above
from lifespan_ph.pmod import barcode_module, barcode_of, reverse_barcode
from lifespan_ph.samples import conjugate, random_barcode, random_overlap_matching

F = LifespanFunctor
seeds = st.integers(0, 2**32 - 1)


@st.composite
def grid_intervals(draw, top=None):
    top = draw(st.integers(1, 8)) if top is None else top
    lo = draw(st.integers(0, top))
    hi = draw(st.integers(lo, top))
    return Interval(lo, hi, IndexUniverse.grid(top))


@st.composite
def interval_pairs(draw):
    top = draw(st.integers(1, 8))
    return draw(grid_intervals(top)), draw(grid_intervals(top))


@st.composite
def grid_barcodes(draw):
    top = draw(st.integers(1, 8))
    bars = draw(st.lists(grid_intervals(top), max_size=8))
    return Barcode.from_intervals(IndexUniverse.grid(top), bars)


@st.composite
def integer_intervals(draw):
    lo = draw(st.one_of(st.just(-math.inf), st.integers(-6, 6)))
    hi = draw(st.one_of(st.just(math.inf), st.integers(-6, 6)))
    if hi < lo:
        lo, hi = hi, lo
    if lo == math.inf or hi == -math.inf:
        lo, hi = -math.inf, math.inf
    return Interval(lo, hi, IndexUniverse.integers())


def _chain(rng, length):
    top = int(rng.integers(1, 7))
    bars = [random_barcode(rng, top) for _ in range(length + 1)]
    return [random_overlap_matching(rng, a, b) for a, b in zip(bars, bars[1:])]


@given(interval_pairs())
def test_overlap_is_antisymmetric(pair):
    i, j = pair
    if overlaps_above(i, j) and overlaps_above(j, i):
        assert i == j


@given(grid_intervals())
def test_overlap_is_reflexive(i):
    assert overlaps_above(i, i)


@given(seeds)
def test_composition_is_associative(seed):
    s1, s2, s3 = _chain(np.random.default_rng(seed), 3)
    assert bc.compose(s3, bc.compose(s2, s1)).pairs == bc.compose(bc.compose(s3, s2), s1).pairs


@given(seeds)
def test_identities_are_units(seed):
    (s,) = _chain(np.random.default_rng(seed), 1)
    assert bc.compose(s, OverlapMatching.identity(s.source)) == s
    assert bc.compose(OverlapMatching.identity(s.target), s) == s


@given(grid_barcodes())
def test_lifespan_partitions(b):
    def union(*parts):
        return sorted(k for p in parts for k in p.intervals())

    everything = sorted(b.intervals())
    assert union(part(b, F.MORTAL), part(b, F.IMMORTAL)) == everything
    assert union(part(b, F.NASCENT), part(b, F.ANCIENT)) == everything
    assert union(part(b, F.FINITE), part(b, F.ANCIENT_MORTAL), part(b, F.IMMORTAL_NASCENT), part(b, F.CONSTANT)) == everything


@given(st.one_of(grid_intervals(), integer_intervals()))
def test_classes_are_consistent(i):
    c = classify(i)
    assert (F.MORTAL in c) != (F.IMMORTAL in c)
    assert (F.NASCENT in c) != (F.ANCIENT in c)
    assert sum(f in c for f in (F.FINITE, F.CONSTANT, F.ANCIENT_MORTAL, F.IMMORTAL_NASCENT)) == 1


@given(grid_barcodes(), st.sampled_from(list(F)))
def test_parts_commute_with_reversal(b, f):
    assert bc.are_isomorphic(reverse_barcode(part(b, f)), part(reverse_barcode(b), f.dual))


@given(grid_barcodes(), st.sampled_from([2, 3, 5]))
@settings(max_examples=60)
def test_rank_oracle_recovers_barcode(b, p):
    m = barcode_module(b, p)
    assert bc.are_isomorphic(barcode_of(m), b)
    m2, _ = conjugate(m, np.random.default_rng(len(b.tags)))
    assert bc.are_isomorphic(barcode_of(m2), b)


@given(seeds)
@settings(max_examples=60)
def test_exactness_transfers_to_diagrams(seed):
    s, t = _chain(np.random.default_rng(seed), 2)
    first, second = mchdgm.from_barcode_morphism(s), mchdgm.from_barcode_morphism(t)
    assert bc.is_exact(s, t) == mchdgm.is_exact_at(first, second)


@given(seeds)
@settings(max_examples=60)
def test_diagram_functor_preserves_composition(seed):
    s, t = _chain(np.random.default_rng(seed), 2)
    fs, ft = mchdgm.from_barcode_morphism(s), mchdgm.from_barcode_morphism(t)
    composite = mchdgm.from_barcode_morphism(bc.compose(t, s))
    levelwise = tuple(mchdgm.compose_matchings(b, a) for a, b in zip(fs.levels, ft.levels))
    assert composite.levels == levelwise

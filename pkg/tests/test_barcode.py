import math

import pytest

from lifespan_ph.barcode import (
    Bar,
    Barcode,
    Matching,
    OverlapMatching,
    are_isomorphic,
    cokernel,
    coimage,
    compose,
    image,
    is_epi,
    is_exact,
    is_mono,
    is_short_exact,
    is_split,
    kernel,
    opposite,
)
from lifespan_ph.order import IndexUniverse, Interval

Z = IndexUniverse.integers()


def bc(*bars, u=Z):
    return Barcode(u, tuple(Bar(Interval(lo, hi, u), tag) for lo, hi, tag in bars))


def om(src, tgt, *pairs):
    return OverlapMatching(src, tgt, frozenset(pairs))


A = bc((1, 4, "a"))
B = bc((0, 2, "b"))
SIGMA = om(A, B, ("a", "b"))


def test_duplicate_tags_rejected():
    with pytest.raises(ValueError):
        bc((0, 1, "x"), (2, 3, "x"))


def test_matching_must_be_partial_bijection():
    two = bc((0, 2, "b"), (0, 2, "c"))
    with pytest.raises(ValueError):
        Matching(bc((0, 2, "a")), two, frozenset({("a", "b"), ("a", "c")}))


def test_overlap_condition_enforced():
    with pytest.raises(ValueError):
        om(B, A, ("b", "a"))


def test_compose_keeps_overlapping_pair():
    C = bc((0, 1, "c"))
    assert compose(om(B, C, ("b", "c")), SIGMA).pairs == {("a", "c")}


def test_compose_drops_disjoint_pair():
    C = bc((-2, 0, "c"))
    assert compose(om(B, C, ("b", "c")), SIGMA).pairs == frozenset()


def test_compose_identity():
    assert compose(OverlapMatching.identity(B), SIGMA) == SIGMA
    assert compose(SIGMA, OverlapMatching.identity(A)) == SIGMA


def test_compose_middle_mismatch():
    with pytest.raises(ValueError):
        compose(SIGMA, SIGMA)


def test_opposite():
    eq = om(bc((1, 4, "a")), bc((1, 4, "b")), ("a", "b"))
    assert opposite(eq).is_overlap()
    assert not opposite(SIGMA).is_overlap()
    assert opposite(om(A, B)).pairs == frozenset()


def test_kernel_cokernel_image_coimage():
    assert kernel(SIGMA) == bc((3, 4, "a"))
    assert cokernel(SIGMA) == bc((0, 0, "b"))
    assert image(SIGMA) == bc((1, 2, "b"))
    assert coimage(SIGMA) == bc((1, 2, "a"))


def test_identity_and_zero():
    ident = OverlapMatching.identity(A)
    assert len(kernel(ident)) == 0 and len(cokernel(ident)) == 0
    assert are_isomorphic(image(ident), A)
    zero = om(A, B)
    assert kernel(zero) == A and cokernel(zero) == B and len(image(zero)) == 0


def test_mono_epi():
    ident = OverlapMatching.identity(A)
    assert is_mono(ident) and is_epi(ident)
    assert not is_mono(SIGMA) and not is_epi(SIGMA)
    wide = om(bc((0, 4, "a")), bc((0, 2, "b")), ("a", "b"))
    assert is_epi(wide) and not is_mono(wide)


def test_is_split():
    assert is_split(om(bc((0, 2, "a")), bc((0, 2, "b")), ("a", "b")))
    assert not is_split(om(bc((0, 4, "a")), bc((0, 2, "b")), ("a", "b")))
    whole = bc((0, 2, "a"), (5, 7, "c"))
    assert is_split(OverlapMatching.inclusion(bc((0, 2, "a")), whole))
    with pytest.raises(ValueError):
        is_split(SIGMA)


def test_are_isomorphic():
    assert not are_isomorphic(bc((0, 1, 0), (0, 1, 1)), bc((0, 1, 0)))
    assert are_isomorphic(bc((0, 1, 0), (2, 3, 1)), bc((2, 3, 0), (0, 1, 1)))
    assert are_isomorphic(bc(), bc())


def test_infinite_kernel():
    s = om(bc((-math.inf, math.inf, "a")), bc((-math.inf, 3, "b")), ("a", "b"))
    assert kernel(s) == bc((4, math.inf, "a"))


def test_short_exact():
    whole = bc((0, 2, "a"), (5, 7, "c"))
    sub = bc((0, 2, "a"))
    quot = bc((5, 7, "c"))
    inc = OverlapMatching.inclusion(sub, whole)
    proj = OverlapMatching.coinclusion(whole, quot)
    assert is_exact(inc, proj) and is_short_exact(inc, proj)
    assert not is_exact(om(sub, whole), proj)

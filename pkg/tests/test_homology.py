import numpy as np
import pytest

from lifespan_ph import fp
from lifespan_ph.homology import (
    ClosureError,
    FilteredComplex,
    absolute_barcodes,
    boundary_matrix,
    compute_pairing,
    cone,
    dense_boundary,
    pointwise_module,
    reduce,
    reduce_with_clearing,
    relative_barcodes,
)
from lifespan_ph.pmod import barcode_of
from lifespan_ph.samples import filtration_corpus


def test_grade_zero_and_top_enforced():
    with pytest.raises(ValueError):
        FilteredComplex(2, {(0,): 0})
    with pytest.raises(ValueError):
        FilteredComplex(2, {(0,): 3})


def test_closure_error_names_face():
    with pytest.raises(ClosureError, match="missing face 1 of simplex 0 1"):
        FilteredComplex(2, {(0,): 1, (0, 1): 2})
    with pytest.raises(ClosureError, match="appears after"):
        FilteredComplex(2, {(0,): 2, (1,): 1, (0, 1): 1})


def test_simplex_order(triangle):
    assert triangle.simplices(1) == [(0, 1), (1, 2), (0, 2)]
    assert triangle.dim == 2 and triangle.is_colimit_proper()


@pytest.mark.parametrize("p", [2, 3, 5])
def test_boundary_squares_to_zero(triangle, p):
    b1, b2 = dense_boundary(triangle, 1, p), dense_boundary(triangle, 2, p)
    assert b1.shape == (3, 3)
    assert all(np.count_nonzero(col) == 2 for col in b1.T)
    assert not np.any(fp.matmul(b1, b2, p))


def test_signs_only_at_odd_primes(triangle):
    assert set(np.unique(dense_boundary(triangle, 1, 2))) == {0, 1}
    assert set(np.unique(dense_boundary(triangle, 1, 3))) == {0, 1, 2}


def test_empty_complex():
    x = FilteredComplex(3, {})
    assert boundary_matrix(x, 1).columns == []
    assert len(absolute_barcodes(x, 0)) == 0
    assert compute_pairing(x, 2).same_as(reduce_with_clearing(x, 2))


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("variant", ["homology", "cohomology"])
def test_triangle_barcodes(triangle, p, variant):
    assert absolute_barcodes(triangle, 0, p, variant).intervals() == [(1, 4)]
    assert absolute_barcodes(triangle, 1, p, variant).intervals() == [(2, 2)]
    assert absolute_barcodes(triangle, 1, p, variant, clearing=True).intervals() == [(2, 2)]


def test_triangle_relative(triangle):
    for method in ("oracle", "correspondence"):
        assert relative_barcodes(triangle, 0, method=method).intervals() == [(0, 0)]
        assert relative_barcodes(triangle, 1, method=method).intervals() == []
        assert relative_barcodes(triangle, 2, method=method).intervals() == [(2, 2)]


def test_small_fixtures():
    point = FilteredComplex(1, {(0,): 1})
    assert absolute_barcodes(point, 0).intervals() == [(1, 1)]
    edge = FilteredComplex(2, {(0,): 1, (1,): 1, (0, 1): 2})
    assert absolute_barcodes(edge, 0).intervals() == [(1, 1), (1, 2)]
    disjoint = FilteredComplex(3, {(v,): 1 for v in range(4)})
    assert absolute_barcodes(disjoint, 0).intervals() == [(1, 3)] * 4


def test_cone_kills_everything_but_a_point(triangle):
    capped = cone(triangle)
    assert absolute_barcodes(capped, 1).intervals() == [(2, 2)]
    assert [b for b in absolute_barcodes(capped, 0).intervals() if b[1] == 4] == [(1, 4)]


def test_reduce_pivots_distinct(triangle):
    res = reduce(boundary_matrix(triangle, 1, 3))
    assert len(set(res.lows.values())) == len(res.lows)


def test_clearing_counts_on_small_corpus():
    for x, p in filtration_corpus(3, 30):
        for direction in ("homology", "cohomology"):
            plain = compute_pairing(x, p, direction=direction)
            cleared = compute_pairing(x, p, clearing=True, direction=direction)
            assert cleared.same_as(plain)
            assert cleared.column_additions <= plain.column_additions


def test_oracle_agrees_on_small_corpus():
    for x, p in filtration_corpus(4, 30):
        for d in range(x.dim + 1):
            assert absolute_barcodes(x, d, p).intervals() == barcode_of(pointwise_module(x, d, p)).intervals()

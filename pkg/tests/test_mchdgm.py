import numpy as np
import pytest

from lifespan_ph import fp
from lifespan_ph.barcode import Barcode, OverlapMatching, are_isomorphic, coimage, kernel
from lifespan_ph.lifespan import LifespanFunctor, part
from lifespan_ph.mchdgm import (
    DiagramMorphism,
    MatchingDiagram,
    colimit,
    colimit_matching,
    components,
    diagram_lifespan_part,
    from_barcode,
    from_barcode_morphism,
    identity_diagram_morphism,
    is_exact_at,
    limit,
    limit_matching,
    matching_exact,
    to_barcode,
    to_barcode_morphism,
    to_module,
    to_module_morphism,
)
from lifespan_ph.order import IndexUniverse, Interval
from lifespan_ph.pmod import barcode_of
from lifespan_ph.samples import random_barcode, random_composable, random_diagram


def chain(matched: bool):
    return MatchingDiagram((("x",), ("y",)), (frozenset({("x", "y")}) if matched else frozenset(),))


def test_components_of_chain():
    comps = components(chain(True))
    assert [c.support.key for c in comps] == [(0, 1)]
    assert sorted(c.support.key for c in components(chain(False))) == [(0, 0), (1, 1)]


def test_unmatched_singletons():
    d = MatchingDiagram(((), ("a", "b", "c"), ()), (frozenset(), frozenset()))
    assert [c.support.key for c in components(d)] == [(1, 1)] * 3


def test_bad_step_rejected():
    with pytest.raises(ValueError):
        MatchingDiagram((("x",), ("y", "z")), (frozenset({("x", "y"), ("x", "z")}),))


def test_limit_colimit():
    u = IndexUniverse.grid(3)
    d = from_barcode(Barcode.from_intervals(u, [Interval(0, 3, u), Interval(1, 3, u), Interval(0, 1, u)]))
    lim, _ = limit(d)
    colim, maps = colimit(d)
    assert sorted(c.support.key for c in lim) == [(0, 1), (0, 3)]
    assert sorted(c.support.key for c in colim) == [(0, 3), (1, 3)]
    assert len(maps[0]) == 1 and len(maps[3]) == 2
    empty = MatchingDiagram(((), ()), (frozenset(),))
    assert limit(empty)[0] == [] and colimit(empty)[0] == []


def test_to_barcode_and_back():
    assert to_barcode(chain(True)).intervals() == [(0, 1)]
    u = IndexUniverse.grid(1)
    d = from_barcode(Barcode.from_intervals(u, [Interval(0, 1, u)]))
    assert d.sets == ((0,), (0,)) and d.steps == (frozenset({(0, 0)}),)
    d2 = from_barcode(Barcode.from_intervals(u, [Interval(0, 0, u), Interval(1, 1, u)]))
    assert d2.steps == (frozenset(),)


def test_from_barcode_rejects_integers():
    z = IndexUniverse.integers()
    with pytest.raises(ValueError):
        from_barcode(Barcode.from_intervals(z, [Interval(0, 1, z)]))


def test_identity_morphism_maps_to_identity():
    d = chain(True)
    sigma = to_barcode_morphism(identity_diagram_morphism(d))
    assert sigma == OverlapMatching.identity(to_barcode(d))


def test_naturality_checked():
    d = chain(True)
    with pytest.raises(ValueError):
        DiagramMorphism(d, d, (frozenset({("x", "x")}), frozenset()))


def test_to_module():
    m = to_module(chain(True))
    assert m.dims == (1, 1) and m.steps[0].tolist() == [[1]]
    assert to_module(chain(False)).steps[0].tolist() == [[0]]


def test_lifespan_part_of_diagram():
    u = IndexUniverse.grid(4)
    full = from_barcode(Barcode.from_intervals(u, [Interval(0, 4, u)]))
    assert len(to_barcode(diagram_lifespan_part(full, LifespanFunctor.MORTAL))) == 0
    mid = from_barcode(Barcode.from_intervals(u, [Interval(1, 3, u)]))
    assert to_barcode(diagram_lifespan_part(mid, LifespanFunctor.FINITE)).intervals() == [(1, 3)]


@pytest.mark.parametrize("seed", range(40))
def test_random_round_trips(seed):
    rng = np.random.default_rng(seed)
    b = random_barcode(rng)
    assert are_isomorphic(to_barcode(from_barcode(b)), b)
    d = random_diagram(rng)
    b2 = to_barcode(d)
    assert are_isomorphic(to_barcode(from_barcode(b2)), b2)
    assert are_isomorphic(barcode_of(to_module(d)), b2)
    for f in LifespanFunctor:
        assert are_isomorphic(to_barcode(diagram_lifespan_part(d, f)), part(b2, f))
    # colim of F(D) is M_N and has |colim D| elements
    assert to_module(d).dims[-1] == len(colimit(d)[0])


def module_exact(phi, psi):
    for a, b in zip(phi.levels, psi.levels):
        p = phi.p
        if np.any(fp.matmul(b, a, p)):
            return False
        if fp.rank(a, p) + fp.rank(b, p) != a.shape[0]:
            return False
    return True


@pytest.mark.parametrize("seed", range(40))
def test_matching_module_functor_reflects_exactness(seed):
    rng = np.random.default_rng(1000 + seed)
    sigma, tau = random_composable(rng)
    f, g = from_barcode_morphism(sigma), from_barcode_morphism(tau)
    assert is_exact_at(f, g) == module_exact(to_module_morphism(f), to_module_morphism(g))


def kernel_sequence(sigma):
    """ker sigma -> B -> coim sigma, a short exact sequence in Barc."""
    k, c = kernel(sigma), coimage(sigma)
    inc = OverlapMatching(k, sigma.source, frozenset((b.tag, b.tag) for b in k))
    proj = OverlapMatching(sigma.source, c, frozenset((b.tag, b.tag) for b in c))
    return inc, proj


@pytest.mark.parametrize("seed", range(40))
def test_limit_colimit_exact(seed):
    rng = np.random.default_rng(2000 + seed)
    sigma, _ = random_composable(rng)
    inc, proj = kernel_sequence(sigma)
    f, g = from_barcode_morphism(inc), from_barcode_morphism(proj)
    assert is_exact_at(f, g)
    middle = f.target
    assert matching_exact(colimit_matching(f), colimit_matching(g), [c.key for c in colimit(middle)[0]])
    assert matching_exact(limit_matching(f), limit_matching(g), [c.key for c in limit(middle)[0]])

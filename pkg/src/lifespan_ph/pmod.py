"""Persistence modules over F_p on a finite grid.

A module is a tower of matrices ``steps[t]: F^{d_t} -> F^{d_{t+1}}``.
Kernels, images, cokernels and all lifespan parts are computed pointwise
as subquotients ``U_t / L_t`` of an ambient module, with induced step maps
expressed in deterministic bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import fp
from .barcode import Bar, Barcode, OverlapMatching, are_isomorphic
from .lifespan import Complement, LifespanFunctor, part as barcode_part
from .order import IndexUniverse, Interval, overlaps_above, reverse


def _freeze(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=np.int64)
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class PersistenceModule:
    dims: tuple[int, ...]
    steps: tuple[np.ndarray, ...]
    p: int = 2

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 0 for d in dims):
            raise ValueError("dims must be a nonempty sequence of non-negative integers")
        if not fp.is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if len(self.steps) != len(dims) - 1:
            raise ValueError(f"expected {len(dims) - 1} step matrices, got {len(self.steps)}")
        steps = []
        for t, a in enumerate(self.steps):
            a = np.asarray(a, dtype=np.int64).reshape(dims[t + 1], dims[t]) % self.p
            steps.append(_freeze(a))
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "steps", tuple(steps))

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    @property
    def universe(self) -> IndexUniverse:
        return IndexUniverse.grid(self.top)

    def fold(self, i: int, j: int) -> np.ndarray:
        """Structure map ``M_i -> M_j`` for ``i <= j``."""
        if not 0 <= i <= j <= self.top:
            raise ValueError(f"bad index pair ({i}, {j})")
        m = fp.eye(self.dims[i])
        for t in range(i, j):
            m = fp.matmul(self.steps[t], m, self.p)
        return m

    @cached_property
    def to_top(self) -> list[np.ndarray]:
        out = [None] * (self.top + 1)
        out[self.top] = fp.eye(self.dims[self.top])
        for t in range(self.top - 1, -1, -1):
            out[t] = fp.matmul(out[t + 1], self.steps[t], self.p)
        return out

    @cached_property
    def from_bottom(self) -> list[np.ndarray]:
        out = [fp.eye(self.dims[0])]
        for t in range(self.top):
            out.append(fp.matmul(self.steps[t], out[t], self.p))
        return out

    def __repr__(self):
        return f"PersistenceModule(dims={self.dims}, p={self.p})"


def same_module(a: PersistenceModule, b: PersistenceModule) -> bool:
    return a is b or (
        a.p == b.p and a.dims == b.dims and all(np.array_equal(x, y) for x, y in zip(a.steps, b.steps))
    )


def constant_module(dim: int, top: int, p: int = 2) -> PersistenceModule:
    return PersistenceModule((dim,) * (top + 1), tuple(fp.eye(dim) for _ in range(top)), p)


def zero_module(top: int, p: int = 2) -> PersistenceModule:
    return constant_module(0, top, p)


@dataclass(frozen=True, eq=False)
class ModuleMorphism:
    source: PersistenceModule
    target: PersistenceModule
    levels: tuple[np.ndarray, ...]

    def __post_init__(self):
        s, t = self.source, self.target
        if s.top != t.top or s.p != t.p:
            raise ValueError("source and target live on different grids or fields")
        levels = []
        for k, a in enumerate(self.levels):
            levels.append(_freeze(np.asarray(a, dtype=np.int64).reshape(t.dims[k], s.dims[k]) % s.p))
        if len(levels) != s.top + 1:
            raise ValueError("one level matrix per grid position is required")
        object.__setattr__(self, "levels", tuple(levels))
        p = s.p
        for k in range(s.top):
            lhs = fp.matmul(t.steps[k], levels[k], p)
            rhs = fp.matmul(levels[k + 1], s.steps[k], p)
            if not np.array_equal(lhs, rhs):
                raise ValueError(f"square at {k} -> {k + 1} does not commute")

    @property
    def p(self) -> int:
        return self.source.p

    @property
    def top(self) -> int:
        return self.source.top


def identity_morphism(m: PersistenceModule) -> ModuleMorphism:
    return ModuleMorphism(m, m, tuple(fp.eye(d) for d in m.dims))


def zero_morphism(s: PersistenceModule, t: PersistenceModule) -> ModuleMorphism:
    return ModuleMorphism(s, t, tuple(fp.zeros(b, a) for a, b in zip(s.dims, t.dims)))


def compose(psi: ModuleMorphism, phi: ModuleMorphism) -> ModuleMorphism:
    """``psi . phi``."""
    if not same_module(phi.target, psi.source):
        raise ValueError("morphisms are not composable")
    p = phi.p
    return ModuleMorphism(
        phi.source, psi.target, tuple(fp.matmul(b, a, p) for a, b in zip(phi.levels, psi.levels))
    )


# ---------------------------------------------------------------- subquotients


@dataclass(eq=False)
class Subquotient:
    """``U_t / L_t`` inside an ambient module, with chosen complements ``C_t`` of ``L_t`` in ``U_t``."""

    ambient: PersistenceModule
    lower: list
    compl: list
    module: PersistenceModule = field(init=False)

    def __post_init__(self):
        amb, p = self.ambient, self.ambient.p
        steps = []
        for t in range(amb.top):
            moved = fp.matmul(amb.steps[t], self.compl[t], p)
            steps.append(self.coords(t + 1, moved))
        self.module = PersistenceModule(tuple(c.shape[1] for c in self.compl), tuple(steps), p)

    def coords(self, t: int, vectors: np.ndarray) -> np.ndarray:
        """Coordinates modulo ``L_t`` of vectors lying in ``U_t``."""
        basis = np.concatenate([self.lower[t], self.compl[t]], axis=1)
        x = fp.solve(basis, vectors, self.ambient.p)
        return x[self.lower[t].shape[1]:]


def subquotient(ambient: PersistenceModule, upper: Sequence, lower: Sequence | None = None) -> Subquotient:
    p = ambient.p
    if lower is None:
        lower = [fp.zeros(d, 0) for d in ambient.dims]
    lower = [fp.column_basis(l, p) for l in lower]
    compl = [fp.extend_basis(l, u, p) for l, u in zip(lower, upper)]
    return Subquotient(ambient, lower, compl)


def induced(src: Subquotient, tgt: Subquotient, ambient_levels: Sequence) -> ModuleMorphism:
    """Morphism of subquotients induced by a map of ambients that respects U and L."""
    p = src.ambient.p
    levels = []
    for t, a in enumerate(ambient_levels):
        levels.append(tgt.coords(t, fp.matmul(a, src.compl[t], p)))
    return ModuleMorphism(src.module, tgt.module, tuple(levels))


def _kernel_sq(phi: ModuleMorphism) -> Subquotient:
    return subquotient(phi.source, [fp.null_space(a, phi.p) for a in phi.levels])


def _image_sq(phi: ModuleMorphism) -> Subquotient:
    return subquotient(phi.target, [fp.column_basis(a, phi.p) for a in phi.levels])


def _cokernel_sq(phi: ModuleMorphism) -> Subquotient:
    return subquotient(
        phi.target, [fp.eye(d) for d in phi.target.dims], [fp.column_basis(a, phi.p) for a in phi.levels]
    )


def morphism_kernel(phi: ModuleMorphism) -> PersistenceModule:
    return _kernel_sq(phi).module


def morphism_image(phi: ModuleMorphism) -> PersistenceModule:
    return _image_sq(phi).module


def morphism_cokernel(phi: ModuleMorphism) -> PersistenceModule:
    return _cokernel_sq(phi).module


def kernel_inclusion(phi: ModuleMorphism) -> ModuleMorphism:
    sq = _kernel_sq(phi)
    return ModuleMorphism(sq.module, phi.source, tuple(sq.compl))


def cokernel_projection(phi: ModuleMorphism) -> ModuleMorphism:
    sq = _cokernel_sq(phi)
    levels = [sq.coords(t, fp.eye(d)) for t, d in enumerate(phi.target.dims)]
    return ModuleMorphism(phi.target, sq.module, tuple(levels))


# ------------------------------------------------------- interval and barcode modules


def barcode_module(barcode: Barcode, p: int = 2) -> PersistenceModule:
    """Direct sum of interval modules, one summand per bar, in bar order."""
    u = barcode.universe
    if not u.is_grid:
        raise ValueError("barcode modules need a finite grid")
    alive = [[b.tag for b in barcode if b.lo <= t <= b.hi] for t in u.positions()]
    steps = []
    for t in range(u.top):
        pos = {tag: k for k, tag in enumerate(alive[t + 1])}
        a = fp.zeros(len(alive[t + 1]), len(alive[t]))
        for k, tag in enumerate(alive[t]):
            if tag in pos:
                a[pos[tag], k] = 1
        steps.append(a)
    return PersistenceModule(tuple(len(x) for x in alive), tuple(steps), p)


def barcode_module_morphism(sigma: OverlapMatching, p: int = 2) -> ModuleMorphism:
    src, tgt = barcode_module(sigma.source, p), barcode_module(sigma.target, p)
    u = sigma.source.universe
    levels = []
    for t in u.positions():
        s_alive = [b.tag for b in sigma.source if b.lo <= t <= b.hi]
        t_alive = {b.tag: k for k, b in enumerate(b for b in sigma.target if b.lo <= t <= b.hi)}
        a = fp.zeros(len(t_alive), len(s_alive))
        fwd = sigma.forward()
        for k, tag in enumerate(s_alive):
            if tag in fwd and fwd[tag] in t_alive:
                a[t_alive[fwd[tag]], k] = 1
        levels.append(a)
    return ModuleMorphism(src, tgt, tuple(levels))


def interval_module(interval: Interval, p: int = 2) -> PersistenceModule:
    return barcode_module(Barcode(interval.universe, (Bar(interval, 0),)), p)


def canonical_morphism(i: Interval, j: Interval, p: int = 2) -> ModuleMorphism:
    if not overlaps_above(i, j):
        raise ValueError(f"{i} does not overlap {j} above")
    src = Barcode(i.universe, (Bar(i, 0),))
    tgt = Barcode(j.universe, (Bar(j, 0),))
    return barcode_module_morphism(OverlapMatching(src, tgt, frozenset({(0, 0)})), p)


# ---------------------------------------------------------------- rank oracle


@dataclass(frozen=True)
class RankFunction:
    top: int
    table: np.ndarray  # table[i, j] = rank of M_i -> M_j, zero below the diagonal

    def __call__(self, i: int, j: int) -> int:
        if i < 0 or j > self.top:
            return 0
        return int(self.table[i, j])


def rank_function(m: PersistenceModule) -> RankFunction:
    n = m.top + 1
    table = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        f = fp.eye(m.dims[i])
        table[i, i] = m.dims[i]
        for j in range(i + 1, n):
            f = fp.matmul(m.steps[j - 1], f, m.p)
            table[i, j] = fp.rank(f, m.p)
            if table[i, j] == 0:
                break
    return RankFunction(m.top, table)


def multiplicities(m: PersistenceModule) -> dict:
    """Interval multiplicities by inclusion-exclusion on the rank function."""
    r = rank_function(m)
    out = {}
    for i in range(m.top + 1):
        for j in range(i, m.top + 1):
            mu = r(i, j) - r(i - 1, j) - r(i, j + 1) + r(i - 1, j + 1)
            if mu < 0:
                raise ArithmeticError(f"negative multiplicity at [{i},{j}]")
            if mu:
                out[i, j] = mu
    return out


def barcode_of(m: PersistenceModule) -> Barcode:
    u = m.universe
    intervals = []
    for (i, j), mu in sorted(multiplicities(m).items()):
        intervals += [Interval(i, j, u)] * mu
    return Barcode.from_intervals(u, intervals)


# ------------------------------------------------------------------- lifespan


def unit(m: PersistenceModule) -> ModuleMorphism:
    """``M -> Delta colim M``; on a finite grid the colimit is ``M_N``."""
    return ModuleMorphism(m, constant_module(m.dims[-1], m.top, m.p), tuple(m.to_top))


def counit(m: PersistenceModule) -> ModuleMorphism:
    """``Delta lim M -> M``; on a finite grid the limit is ``M_0``."""
    return ModuleMorphism(constant_module(m.dims[0], m.top, m.p), m, tuple(m.from_bottom))


_SELF, _COLIM, _LIM = "self", "colim", "lim"


def _part_spaces(m: PersistenceModule, which):
    """Ambient kind plus upper/lower subspaces defining a lifespan part or complement."""
    p, n = m.p, m.top + 1
    F = LifespanFunctor
    ker_eta = lambda t: fp.null_space(m.to_top[t], p)
    im_eta = lambda t: fp.column_basis(m.to_top[t], p)
    im_eps = lambda t: fp.column_basis(m.from_bottom[t], p)
    everything = lambda d: fp.eye(d)
    if which is F.MORTAL:
        return _SELF, [ker_eta(t) for t in range(n)], None
    if which is F.IMMORTAL:
        return _COLIM, [im_eta(t) for t in range(n)], None
    if which is F.ANCIENT:
        return _SELF, [im_eps(t) for t in range(n)], None
    if which is F.NASCENT:
        return _SELF, [everything(d) for d in m.dims], [im_eps(t) for t in range(n)]
    if which is F.FINITE:
        # image of Mortal -> Nascent inside M / Ancient
        return _SELF, [fp.span_sum(ker_eta(t), im_eps(t), p) for t in range(n)], [im_eps(t) for t in range(n)]
    if which is F.ANCIENT_MORTAL:
        return _SELF, [fp.intersect(ker_eta(t), im_eps(t), p) for t in range(n)], None
    through = fp.column_basis(m.fold(0, m.top), p)
    if which is F.CONSTANT:
        # image of Ancient -> Immortal inside Delta colim M
        return _COLIM, [through] * n, None
    if which is F.IMMORTAL_NASCENT:
        return _COLIM, [im_eta(t) for t in range(n)], [through] * n
    if which is Complement.UNBORN:
        return _COLIM, [everything(m.dims[-1])] * n, [im_eta(t) for t in range(n)]
    if which is Complement.GHOST:
        return _LIM, [fp.null_space(m.from_bottom[t], p) for t in range(n)], None
    raise ValueError(f"unknown lifespan functor {which!r}")


def _ambient(m: PersistenceModule, kind: str) -> PersistenceModule:
    if kind == _SELF:
        return m
    if kind == _COLIM:
        return constant_module(m.dims[-1], m.top, m.p)
    return constant_module(m.dims[0], m.top, m.p)


def _part_sq(m: PersistenceModule, which) -> tuple[str, Subquotient]:
    kind, upper, lower = _part_spaces(m, which)
    return kind, subquotient(_ambient(m, kind), upper, lower)


def lifespan_part_module(m: PersistenceModule, which) -> PersistenceModule:
    """Lifespan part (or unborn/ghost complement) of a module by pointwise linear algebra."""
    return _part_sq(m, which)[1].module


def lifespan_part_morphism(phi: ModuleMorphism, which) -> ModuleMorphism:
    kind, src = _part_sq(phi.source, which)
    _, tgt = _part_sq(phi.target, which)
    if kind == _SELF:
        levels = phi.levels
    elif kind == _COLIM:
        levels = [phi.levels[-1]] * (phi.top + 1)
    else:
        levels = [phi.levels[0]] * (phi.top + 1)
    return induced(src, tgt, levels)


def complement_module(m: PersistenceModule, which: Complement) -> PersistenceModule:
    return lifespan_part_module(m, which)


def all_steps_mono(m: PersistenceModule) -> bool:
    return all(fp.rank(a, m.p) == m.dims[t] for t, a in enumerate(m.steps))


def all_steps_epi(m: PersistenceModule) -> bool:
    return all(fp.rank(a, m.p) == m.dims[t + 1] for t, a in enumerate(m.steps))


# ---------------------------------------------------------------- dualization


def dualize(m: PersistenceModule) -> PersistenceModule:
    """Pointwise dual, reindexed so position ``s`` holds ``M_{N-s}^*``."""
    n = m.top
    steps = tuple(m.steps[n - 1 - s].T for s in range(n))
    return PersistenceModule(tuple(reversed(m.dims)), steps, m.p)


def dualize_morphism(phi: ModuleMorphism) -> ModuleMorphism:
    n = phi.top
    return ModuleMorphism(
        dualize(phi.target), dualize(phi.source), tuple(phi.levels[n - s].T for s in range(n + 1))
    )


def reverse_barcode(barcode: Barcode) -> Barcode:
    """Relabel all bars under ``t -> N - t`` (tags kept)."""
    return Barcode(barcode.universe, tuple(Bar(reverse(b.interval), b.tag) for b in barcode))


# ------------------------------------------------------------------ reports


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    status: str  # "pass" | "fail" | "precondition-not-met"
    left: Barcode | None = None
    right: Barcode | None = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status != "fail"


def compare(name: str, left: Barcode, right: Barcode, precondition: bool = True) -> CheckOutcome:
    holds = are_isomorphic(left, right)
    if not precondition:
        return CheckOutcome(name, "precondition-not-met", left, right, f"holds={holds}")
    return CheckOutcome(name, "pass" if holds else "fail", left, right)


@dataclass(frozen=True)
class ImagePartsReport:
    colim_mono: bool
    lim_epi: bool
    outcomes: tuple[CheckOutcome, ...]

    def __getitem__(self, name: str) -> CheckOutcome:
        for o in self.outcomes:
            if o.name == name:
                return o
        raise KeyError(name)

    @property
    def ok(self) -> bool:
        return all(o.ok for o in self.outcomes)


def check_image_parts(phi: ModuleMorphism) -> ImagePartsReport:
    """Evaluate both halves of the image/kernel/cokernel theorem for lifespan parts.

    Every comparison is computed; statuses are ``precondition-not-met`` when
    the half's hypothesis (colim phi mono, resp. lim phi epi) fails.
    """
    F, p = LifespanFunctor, phi.p
    s, t = phi.source, phi.target
    colim_mono = fp.rank(phi.levels[-1], p) == s.dims[-1]
    lim_epi = fp.rank(phi.levels[0], p) == t.dims[0]
    im = morphism_image(phi)
    zero = Barcode.empty(s.universe)
    out = []

    def part_of(mod, f):
        return barcode_of(lifespan_part_module(mod, f))

    mortal, immortal = lifespan_part_morphism(phi, F.MORTAL), lifespan_part_morphism(phi, F.IMMORTAL)
    out += [
        compare("ker mortal(phi) = ker phi", barcode_of(morphism_kernel(mortal)), barcode_of(morphism_kernel(phi)), colim_mono),
        compare("ker immortal(phi) = 0", barcode_of(morphism_kernel(immortal)), zero, colim_mono),
        compare("im mortal(phi) = mortal(im phi)", barcode_of(morphism_image(mortal)), part_of(im, F.MORTAL), colim_mono),
        compare("im immortal(phi) = immortal(im phi)", barcode_of(morphism_image(immortal)), part_of(im, F.IMMORTAL), colim_mono),
        compare("immortal(im phi) = immortal(source)", part_of(im, F.IMMORTAL), part_of(s, F.IMMORTAL), colim_mono),
    ]
    nascent, ancient = lifespan_part_morphism(phi, F.NASCENT), lifespan_part_morphism(phi, F.ANCIENT)
    out += [
        compare("coker nascent(phi) = coker phi", barcode_of(morphism_cokernel(nascent)), barcode_of(morphism_cokernel(phi)), lim_epi),
        compare("coker ancient(phi) = 0", barcode_of(morphism_cokernel(ancient)), zero, lim_epi),
        compare("im nascent(phi) = nascent(im phi)", barcode_of(morphism_image(nascent)), part_of(im, F.NASCENT), lim_epi),
        compare("im ancient(phi) = ancient(im phi)", barcode_of(morphism_image(ancient)), part_of(im, F.ANCIENT), lim_epi),
        compare("ancient(im phi) = ancient(target)", part_of(im, F.ANCIENT), part_of(t, F.ANCIENT), lim_epi),
    ]
    return ImagePartsReport(colim_mono, lim_epi, tuple(out))


def dual_lifespan_check(m: PersistenceModule) -> tuple[CheckOutcome, ...]:
    """Dual of each part against the order-swapped part of the dual, as barcodes."""
    dual = dualize(m)
    out = []
    for f in LifespanFunctor:
        left = barcode_of(dualize(lifespan_part_module(m, f)))
        right = barcode_of(lifespan_part_module(dual, f.dual))
        out.append(compare(f"dual {f.value} = {f.dual.value} of dual", left, right))
    return tuple(out)


def lifespan_barcode_check(m: PersistenceModule) -> tuple[CheckOutcome, ...]:
    """Barcode of each module-level part against the barcode-level filter."""
    b = barcode_of(m)
    return tuple(
        compare(f"{f.value} part barcode", barcode_of(lifespan_part_module(m, f)), barcode_part(b, f))
        for f in LifespanFunctor
    )

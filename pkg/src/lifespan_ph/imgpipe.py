"""Morphisms of filtrations and image/kernel/cokernel persistence.

Three routes to image barcodes are provided and must agree:

* ``direct``: decompose the pointwise image of the induced module map;
* ``fast``: one row-reordered boundary reduction (inclusions only);
* ``relcoh``: relative cohomology of the morphism, read through lifespan
  parts and their order-reversed duals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fp
from .barcode import Bar, Barcode, OverlapMatching, are_isomorphic, compose, image, kernel, cokernel, coimage
from .homology import (
    FilteredComplex,
    absolute_barcodes,
    boundary_matrix,
    compute_pairing,
    faces,
    pairing_barcode,
    pointwise_module,
    pointwise_subquotient,
    reduce,
    BoundaryMatrix,
    relative_barcodes,
)
from .lifespan import Complement, LifespanFunctor, complement, lifespan_diagram, part
from .mchdgm import from_barcode, to_barcode
from .order import Interval
from .pmod import (
    CheckOutcome,
    ModuleMorphism,
    barcode_module,
    barcode_of,
    check_image_parts,
    compare,
    complement_module,
    dual_lifespan_check,
    dualize,
    dualize_morphism,
    induced,
    lifespan_barcode_check,
    lifespan_part_module,
    morphism_cokernel,
    morphism_image,
    morphism_kernel,
)


class PreconditionError(ValueError):
    """An input is legitimate but outside the hypotheses of the requested route."""


@dataclass(frozen=True, eq=False)
class FiltrationMorphism:
    """Simplicial map ``L -> K`` compatible with grades (``f(L_t)`` lies in ``K_t``)."""

    source: FilteredComplex
    target: FilteredComplex
    vertex_map: dict = field(default_factory=dict)

    def __post_init__(self):
        src, tgt = self.source, self.target
        if src.top != tgt.top:
            raise ValueError("filtrations live on different grids")
        vmap = {v: self.vertex_map.get(v, v) for v in src.vertices}
        object.__setattr__(self, "vertex_map", vmap)
        for s, g in src.grades.items():
            image_s = self.simplex_image(s)
            if image_s not in tgt.grades:
                raise ValueError(f"image {image_s} of {s} is not a simplex of the target")
            if tgt.grades[image_s] > g:
                raise ValueError(
                    f"simplex {s} (grade {g}) maps to {image_s} which appears later (grade {tgt.grades[image_s]})"
                )

    def simplex_image(self, s: tuple) -> tuple:
        return tuple(sorted({self.vertex_map[v] for v in s}))

    @property
    def kind(self) -> str:
        if all(k == v for k, v in self.vertex_map.items()):
            return "inclusion"
        return "simplicial"

    @property
    def top(self) -> int:
        return self.source.top


def identity_filtration_morphism(x: FilteredComplex) -> FiltrationMorphism:
    return FiltrationMorphism(x, x, {})


def _perm_sign(seq) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def chain_map(f: FiltrationMorphism, d: int, p: int = 2) -> np.ndarray:
    """``C_d(L) -> C_d(K)``; degenerate images go to zero."""
    src, tgt = f.source.simplices(d), f.target.index(d)
    m = fp.zeros(len(tgt), len(src))
    for j, s in enumerate(src):
        images = [f.vertex_map[v] for v in s]
        if len(set(images)) != len(images):
            continue
        m[tgt[tuple(sorted(images))], j] = _perm_sign(images) % p
    return m


def induced_morphism(f: FiltrationMorphism, d: int, p: int = 2, relative: bool = False) -> ModuleMorphism:
    """``H_d(f)`` or ``H_d(colim f, f)`` on pointwise homology, in deterministic bases."""
    src = pointwise_subquotient(f.source, d, p, relative)
    tgt = pointwise_subquotient(f.target, d, p, relative)
    c = chain_map(f, d, p)
    return induced(src, tgt, [c] * (f.top + 1))


def image_barcode_direct(f: FiltrationMorphism, d: int, p: int = 2) -> Barcode:
    return barcode_of(morphism_image(induced_morphism(f, d, p)))


def kernel_barcode(f: FiltrationMorphism, d: int, p: int = 2) -> Barcode:
    return barcode_of(morphism_kernel(induced_morphism(f, d, p)))


def cokernel_barcode(f: FiltrationMorphism, d: int, p: int = 2) -> Barcode:
    return barcode_of(morphism_cokernel(induced_morphism(f, d, p)))


def image_barcode_fast(f: FiltrationMorphism, d: int, p: int = 2) -> Barcode:
    """Image barcode of an inclusion from a single reordered reduction.

    Rows of the degree ``d+1`` boundary of ``K`` are ordered with the
    ``d``-simplices of ``L`` first (in ``L``-order), then the rest; columns
    keep the ``K``-order. A reduced column whose lowest entry is a positive
    ``L``-simplex is an ``L``-cycle becoming a ``K``-boundary, so it ends the
    image class born there.
    """
    if f.kind != "inclusion":
        raise ValueError("the fast image algorithm needs an inclusion of filtrations")
    L, K = f.source, f.target
    u = K.universe
    # positive d-simplices of L, from L's own degree-d reduction
    if d > 0:
        res_l = reduce(boundary_matrix(L, d, p))
        positive = [L.simplices(d)[j] for j in res_l.zero_columns()]
    else:
        positive = list(L.simplices(0))
    l_rows = L.simplices(d)
    in_l = set(l_rows)
    rows = l_rows + [s for s in K.simplices(d) if s not in in_l]
    index = {s: k for k, s in enumerate(rows)}
    cols = K.simplices(d + 1)
    columns = []
    for s in cols:
        col = {}
        for i, face in enumerate(faces(s)):
            col[index[face]] = 1 if p == 2 or i % 2 == 0 else p - 1
        columns.append(col)
    res = reduce(BoundaryMatrix(d + 1, cols, rows, columns, p))
    n_l = len(l_rows)
    death = {}
    for c, r in res.lows.items():
        if r < n_l:
            death[rows[r]] = K.grades[cols[c]]
    intervals = []
    for s in positive:
        b = L.grades[s]
        if s in death:
            if b < death[s]:
                intervals.append((b, death[s] - 1))
        else:
            intervals.append((b, K.top))
    return Barcode.from_intervals(u, [Interval(a, c, u) for a, c in sorted(intervals)])


def top_map_is_iso(f: FiltrationMorphism, d: int, p: int = 2) -> bool:
    a = induced_morphism(f, d, p).levels[-1]
    return a.shape[0] == a.shape[1] and fp.rank(a, p) == a.shape[0]


def top_map_is_epi(f: FiltrationMorphism, d: int, p: int = 2) -> bool:
    a = induced_morphism(f, d, p).levels[-1]
    return fp.rank(a, p) == a.shape[0]


def _relcoh_image(f: FiltrationMorphism, d: int, p: int) -> Barcode:
    if not top_map_is_iso(f, d, p):
        raise PreconditionError(
            f"H_{d}(f_t_max) is not an isomorphism; use the direct (oracle) route instead"
        )
    if not top_map_is_epi(f, d + 1, p):
        raise PreconditionError(
            f"H_{d + 1}(f_t_max) is not surjective; use the direct (oracle) route instead"
        )
    u = f.source.universe
    rel = induced_morphism(f, d + 1, p, relative=True)
    coh_image = morphism_image(dualize_morphism(rel))
    mortal = barcode_of(dualize(lifespan_part_module(coh_image, LifespanFunctor.MORTAL)))
    coh_source = dualize(pointwise_module(f.source, d, p, relative=True))
    immortal = barcode_of(dualize(complement_module(coh_source, Complement.UNBORN)))
    return Barcode.from_intervals(u, [Interval(a, b, u) for a, b in sorted(mortal.intervals() + immortal.intervals())])


def pad_inclusion(f: FiltrationMorphism) -> FiltrationMorphism:
    """Extend an inclusion by one grid step at which both sides equal ``K``.

    The extra step makes the top map the identity; restricting the image
    module of the padded morphism to ``[0, N]`` gives back the original one.
    """
    n = f.top + 1
    target = FilteredComplex(n, dict(f.target.grades))
    grades = {s: f.source.grades.get(s, n) for s in f.target.grades}
    return FiltrationMorphism(FilteredComplex(n, grades), target, {})


def image_via_relative_cohomology(f: FiltrationMorphism, d: int, p: int = 2, pad: bool = True) -> Barcode:
    """Image barcode of ``H_d(f)`` assembled from relative cohomology.

    Mortal half: image of ``H^{d+1}(colim f, f)`` on the reversed grid, its
    mortal part there (nascent in the original order), dualized back.
    Immortal half: unborn complement of ``H^d(colim L, L)`` on the reversed
    grid, dualized back.

    The route needs ``H_d(f_t_max)`` iso and ``H_{d+1}(f_t_max)`` onto. When
    an inclusion misses this and ``pad`` is set, it runs on
    :func:`pad_inclusion` and the result is truncated to the original grid.
    """
    try:
        return _relcoh_image(f, d, p)
    except PreconditionError:
        if not pad or f.kind != "inclusion":
            raise
    u = f.source.universe
    padded = _relcoh_image(pad_inclusion(f), d, p)
    kept = [Interval(a, min(b, f.top), u) for a, b in padded.intervals() if a <= f.top]
    return Barcode.from_intervals(u, kept)


def image_barcode(f: FiltrationMorphism, d: int, p: int = 2, method: str = "direct") -> Barcode:
    if method == "direct":
        return image_barcode_direct(f, d, p)
    if method == "fast":
        return image_barcode_fast(f, d, p)
    if method == "relcoh":
        return image_via_relative_cohomology(f, d, p)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------- verification


@dataclass
class DualityReport:
    outcomes: list = field(default_factory=list)

    def add(self, outcome: CheckOutcome):
        self.outcomes.append(outcome)

    def extend(self, outcomes):
        self.outcomes.extend(outcomes)

    @property
    def ok(self) -> bool:
        return all(o.ok for o in self.outcomes)

    def failures(self) -> list:
        return [o for o in self.outcomes if o.status == "fail"]

    def as_records(self) -> list[dict]:
        out = []
        for o in self.outcomes:
            rec = {"name": o.name, "status": o.status}
            if o.detail:
                rec["detail"] = o.detail
            if o.status == "fail" and o.left is not None:
                rec["left"] = [list(map(_num, k)) for k in o.left.intervals()]
                rec["right"] = [list(map(_num, k)) for k in o.right.intervals()]
            out.append(rec)
        return out


def _num(x):
    return x if isinstance(x, int) else str(x)


def boolean_check(name: str, holds: bool, detail: str = "") -> CheckOutcome:
    return CheckOutcome(name, "pass" if holds else "fail", detail=detail)


def abs_rel_check(x: FilteredComplex, d: int, p: int = 2) -> tuple[CheckOutcome, ...]:
    """Absolute against relative barcodes, relative side from the pointwise oracle."""
    F = LifespanFunctor
    u = x.universe
    rel = relative_barcodes(x, d, p, method="oracle")
    absolute = absolute_barcodes(x, d, p)
    below = absolute_barcodes(x, d - 1, p) if d > 0 else Barcode.empty(u)
    out = [
        compare(f"mortal H_{d - 1} = nascent rel H_{d}", part(below, F.MORTAL), part(rel, F.NASCENT)),
        compare(f"unborn H_{d} = ancient rel H_{d}", complement(absolute, Complement.UNBORN), part(rel, F.ANCIENT)),
        compare(f"immortal H_{d} = ghost rel H_{d}", part(absolute, F.IMMORTAL), complement(rel, Complement.GHOST)),
    ]
    # [a, N] <-> [0, a-1] as an explicit bijection of bars
    essential = sorted(a for a, b in absolute.intervals() if b == x.top)
    ancient = sorted(b + 1 for a, b in rel.intervals() if a == 0)
    out.append(boolean_check(f"essential H_{d} <-> ancient rel H_{d}", essential == ancient))
    return tuple(out)


def _barcode_suite(b: Barcode, report: DualityReport, label: str):
    """Category-level checks for one barcode."""
    identity = OverlapMatching.identity(b)
    zero = Barcode.empty(b.universe)
    report.add(boolean_check(f"{label}: identity is neutral", compose(identity, identity) == identity))
    report.add(compare(f"{label}: kernel of identity", kernel(identity), zero))
    report.add(compare(f"{label}: cokernel of identity", cokernel(identity), zero))
    report.add(compare(f"{label}: image = coimage", image(identity), coimage(identity)))
    if b.universe.is_grid:
        report.add(compare(f"{label}: B(D(B)) = B", to_barcode(from_barcode(b)), b))
        report.add(compare(f"{label}: barcode of M(B) = B", barcode_of(barcode_module(b)), b))


def _lifespan_suite(b: Barcode, report: DualityReport, label: str, p: int):
    F = LifespanFunctor
    diagram = lifespan_diagram(b)
    report.add(boolean_check(f"{label}: lifespan diagram split exact", diagram.all_split_exact()))
    report.add(compare(f"{label}: mortal + immortal = B", part(b, F.MORTAL).disjoint_union(part(b, F.IMMORTAL)), b))
    report.add(compare(f"{label}: nascent + ancient = B", part(b, F.NASCENT).disjoint_union(part(b, F.ANCIENT)), b))
    if not b.universe.is_grid:
        return
    m = barcode_module(b, p)
    report.extend(CheckOutcome(f"{label}: {o.name}", o.status, o.left, o.right) for o in lifespan_barcode_check(m))
    mortal = barcode_of(lifespan_part_module(m, F.MORTAL))
    immortal = barcode_of(lifespan_part_module(m, F.IMMORTAL))
    report.add(compare(f"{label}: module mortal + immortal = M", mortal.disjoint_union(immortal), b))
    nascent = barcode_of(lifespan_part_module(m, F.NASCENT))
    ancient = barcode_of(lifespan_part_module(m, F.ANCIENT))
    report.add(compare(f"{label}: module nascent + ancient = M", nascent.disjoint_union(ancient), b))
    report.extend(CheckOutcome(f"{label}: {o.name}", o.status, o.left, o.right) for o in dual_lifespan_check(m))


def verify_barcode(b: Barcode, p: int = 2, suites=("all",), label: str = "B") -> DualityReport:
    report = DualityReport()
    suites = set(suites)
    if suites & {"all", "barcode"}:
        _barcode_suite(b, report, label)
    if suites & {"all", "lifespan"}:
        _lifespan_suite(b, report, label, p)
    return report


def verify_complex(x: FilteredComplex, p: int = 2, suites=("all",)) -> DualityReport:
    report = DualityReport()
    suites = set(suites)
    every = "all" in suites
    for d in range(x.dim + 2):
        hom = absolute_barcodes(x, d, p)
        if every or "duality" in suites:
            report.add(compare(f"H_{d}: reduction = oracle", hom, barcode_of(pointwise_module(x, d, p))))
            report.add(compare(f"H_{d}: homology = cohomology", hom, absolute_barcodes(x, d, p, "cohomology")))
            plain = compute_pairing(x, p)
            for direction in ("homology", "cohomology"):
                cleared = compute_pairing(x, p, clearing=True, direction=direction)
                report.add(boolean_check(f"H_{d}: clearing ({direction}) pairing = standard", cleared.same_as(plain)))
            report.add(compare(
                f"rel H_{d}: oracle = correspondence",
                relative_barcodes(x, d, p, method="oracle"),
                relative_barcodes(x, d, p, method="correspondence"),
            ))
            report.extend(abs_rel_check(x, d, p))
        if every or "barcode" in suites:
            _barcode_suite(hom, report, f"H_{d}")
        if every or "lifespan" in suites:
            _lifespan_suite(hom, report, f"H_{d}", p)
    if every or "duality" in suites:
        euler = all(
            sum((-1) ** d * sum(1 for a, b in absolute_barcodes(x, d, p).intervals() if a <= t <= b)
                for d in range(x.dim + 1)) == x.euler_characteristic(t)
            for t in range(x.top + 1)
        )
        report.add(boolean_check("Euler characteristic from barcodes", euler))
    if every or "image" in suites:
        report.extend(verify_morphism(identity_filtration_morphism(x), p, ("image",)).outcomes)
    return report


def verify_morphism(f: FiltrationMorphism, p: int = 2, suites=("all",)) -> DualityReport:
    report = DualityReport()
    suites = set(suites)
    every = "all" in suites
    if every or "image" in suites:
        for d in range(max(f.source.dim, f.target.dim) + 1):
            direct = image_barcode_direct(f, d, p)
            if f.kind == "inclusion":
                report.add(compare(f"im H_{d}: fast = direct", image_barcode_fast(f, d, p), direct))
            try:
                relcoh = image_via_relative_cohomology(f, d, p)
                report.add(compare(f"im H_{d}: relcoh = direct", relcoh, direct))
            except PreconditionError as exc:
                report.add(CheckOutcome(f"im H_{d}: relcoh = direct", "precondition-not-met", detail=str(exc)))
            phi = induced_morphism(f, d, p)
            ker, im, coker = (morphism_kernel(phi), morphism_image(phi), morphism_cokernel(phi))
            dims_ok = all(
                ker.dims[t] + im.dims[t] == phi.source.dims[t] and im.dims[t] + coker.dims[t] == phi.target.dims[t]
                for t in range(f.top + 1)
            )
            report.add(boolean_check(f"H_{d}: ker/im/coker dimensions", dims_ok))
            parts = check_image_parts(phi)
            report.extend(CheckOutcome(f"H_{d}(f): {o.name}", o.status, o.left, o.right, o.detail) for o in parts.outcomes)
            if d > 0:
                rel = induced_morphism(f, d, p, relative=True)
                rel_parts = check_image_parts(rel)
                holds = parts.colim_mono and rel_parts.lim_epi
                prev = image_barcode_direct(f, d - 1, p)
                report.add(compare(
                    f"mortal im H_{d - 1}(f) = nascent im H_{d}(colim f, f)",
                    part(prev, LifespanFunctor.MORTAL),
                    part(barcode_of(morphism_image(rel)), LifespanFunctor.NASCENT),
                    precondition=check_image_parts(induced_morphism(f, d - 1, p)).colim_mono and rel_parts.lim_epi,
                ))
    if every or "duality" in suites:
        report.extend(verify_complex(f.source, p, ("duality",)).outcomes)
        report.extend(verify_complex(f.target, p, ("duality",)).outcomes)
    return report

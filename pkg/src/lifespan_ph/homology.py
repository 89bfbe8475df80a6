"""Filtered simplicial complexes and their persistent (co)homology.

Grades run over the grid ``0..N``. Grade 0 is always empty and the full
complex appears by grade ``N``, so every filtration handled here starts
empty and ends constant.

Reduction works column by column. At p = 2 a column is a Python int used
as a bitset; for odd primes it is a ``{row: coefficient}`` dict.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import fp
from .barcode import Barcode
from .order import IndexUniverse, Interval
from .pmod import PersistenceModule, barcode_of, constant_module, subquotient

log = logging.getLogger(__name__)


class ClosureError(ValueError):
    pass


def faces(simplex: tuple) -> list[tuple]:
    """Codimension-one faces, in the order ``simplex`` minus vertex ``i``."""
    if len(simplex) == 1:
        return []
    return [simplex[:i] + simplex[i + 1:] for i in range(len(simplex))]


@dataclass(frozen=True, eq=False)
class FilteredComplex:
    """Simplices (sorted vertex tuples) with grades in ``1..top``."""

    top: int
    grades: dict

    def __post_init__(self):
        if not isinstance(self.top, int) or self.top < 1:
            raise ValueError("the grid must have at least the positions 0 and 1")
        grades = {}
        for s, g in dict(self.grades).items():
            key = tuple(sorted(int(v) for v in s))
            if not key or len(set(key)) != len(key):
                raise ValueError(f"invalid simplex {s!r}")
            if key in grades:
                raise ValueError(f"simplex {key} listed twice")
            if not isinstance(g, (int, np.integer)) or not 1 <= g <= self.top:
                raise ValueError(f"grade {g!r} of {key} outside 1..{self.top}")
            grades[key] = int(g)
        for s, g in grades.items():
            for f in faces(s):
                if f not in grades:
                    raise ClosureError(f"missing face {' '.join(map(str, f))} of simplex {' '.join(map(str, s))}")
                if grades[f] > g:
                    raise ClosureError(f"face {' '.join(map(str, f))} appears after simplex {' '.join(map(str, s))}")
        object.__setattr__(self, "grades", grades)

    @property
    def universe(self) -> IndexUniverse:
        return IndexUniverse.grid(self.top)

    @cached_property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.grades), default=-1)

    @cached_property
    def _by_dim(self) -> dict:
        out = {}
        for s in sorted(self.grades, key=lambda s: (self.grades[s], s)):
            out.setdefault(len(s) - 1, []).append(s)
        return out

    def simplices(self, d: int) -> list[tuple]:
        """``d``-simplices in filtration order: by grade, then lexicographically."""
        return self._by_dim.get(d, [])

    def index(self, d: int) -> dict:
        return {s: k for k, s in enumerate(self.simplices(d))}

    def __len__(self):
        return len(self.grades)

    @property
    def vertices(self) -> list[int]:
        return sorted(s[0] for s in self.grades if len(s) == 1)

    def euler_characteristic(self, t: int) -> int:
        return sum((-1) ** (len(s) - 1) for s, g in self.grades.items() if g <= t)

    def is_colimit_proper(self) -> bool:
        """Initially empty and eventually constant, which the constructor enforces."""
        return all(1 <= g <= self.top for g in self.grades.values())


def cone(x: FilteredComplex, apex: int | None = None, grade: int | None = None) -> FilteredComplex:
    """Add a cone over the whole complex at ``grade`` (default: the top)."""
    grade = x.top if grade is None else grade
    apex = (max(x.vertices, default=-1) + 1) if apex is None else apex
    grades = dict(x.grades)
    grades[(apex,)] = min(grades.get((apex,), grade), grade)
    for s in x.grades:
        grades[tuple(sorted(s + (apex,)))] = grade
    return FilteredComplex(x.top, grades)


# ------------------------------------------------------------ boundary matrices


def _sign(i: int, p: int) -> int:
    return 1 if p == 2 or i % 2 == 0 else p - 1


@dataclass(frozen=True)
class BoundaryMatrix:
    """Boundary ``C_d -> C_{d-1}`` with sparse columns ``{row: coefficient}``."""

    degree: int
    cols: list
    rows: list
    columns: list
    p: int

    def dense(self) -> np.ndarray:
        m = fp.zeros(len(self.rows), len(self.cols))
        for j, col in enumerate(self.columns):
            for i, c in col.items():
                m[i, j] = c
        return m


def boundary_matrix(x: FilteredComplex, d: int, p: int = 2) -> BoundaryMatrix:
    cols = x.simplices(d)
    rows = x.simplices(d - 1) if d > 0 else []
    index = {s: k for k, s in enumerate(rows)}
    columns = []
    for s in cols:
        columns.append({index[f]: _sign(i, p) for i, f in enumerate(faces(s))} if d > 0 else {})
    return BoundaryMatrix(d, cols, rows, columns, p)


def coboundary_matrix(x: FilteredComplex, d: int, p: int = 2) -> BoundaryMatrix:
    """Anti-transpose of the degree ``d+1`` boundary: columns are ``d``-simplices in reverse order."""
    b = boundary_matrix(x, d + 1, p)
    n_rows, n_cols = len(b.cols), len(b.rows)
    columns = [dict() for _ in range(n_cols)]
    for j, col in enumerate(b.columns):
        for i, c in col.items():
            columns[n_cols - 1 - i][n_rows - 1 - j] = c
    return BoundaryMatrix(-(d + 1), b.rows[::-1], b.cols[::-1], columns, p)


def dense_boundary(x: FilteredComplex, d: int, p: int = 2) -> np.ndarray:
    if d <= 0:
        return fp.zeros(0, len(x.simplices(0))) if d == 0 else fp.zeros(0, 0)
    return boundary_matrix(x, d, p).dense()


# ------------------------------------------------------------------- reduction


@dataclass
class ReductionResult:
    columns: list
    lows: dict  # column index -> row index of the lowest nonzero entry
    column_additions: int = 0
    cleared: int = 0

    @property
    def pairs(self) -> list[tuple[int, int]]:
        """``(row, column)`` index pairs read off the pivots."""
        return sorted((r, c) for c, r in self.lows.items())

    def zero_columns(self) -> list[int]:
        return [j for j in range(len(self.columns)) if j not in self.lows]


def _reduce_gf2(columns: list[int], skip) -> ReductionResult:
    cols = list(columns)
    owner = {}
    lows = {}
    adds = 0
    for j, col in enumerate(cols):
        if j in skip:
            cols[j] = 0
            continue
        while col:
            low = col.bit_length() - 1
            k = owner.get(low)
            if k is None:
                owner[low] = j
                lows[j] = low
                break
            col ^= cols[k]
            adds += 1
        cols[j] = col
    return ReductionResult(cols, lows, adds, len(skip))


def _reduce_fp(columns: list[dict], p: int, skip) -> ReductionResult:
    cols = [dict(c) for c in columns]
    owner = {}
    lows = {}
    adds = 0
    for j in range(len(cols)):
        if j in skip:
            cols[j] = {}
            continue
        col = cols[j]
        while col:
            low = max(col)
            k = owner.get(low)
            if k is None:
                owner[low] = j
                lows[j] = low
                break
            other = cols[k]
            factor = (-col[low] * fp.inverse(other[low], p)) % p
            for r, c in other.items():
                v = (col.get(r, 0) + factor * c) % p
                if v:
                    col[r] = v
                else:
                    col.pop(r, None)
            adds += 1
        cols[j] = col
    return ReductionResult(cols, lows, adds, len(skip))


def reduce(matrix: BoundaryMatrix, skip=frozenset()) -> ReductionResult:
    """Left-to-right column reduction until all lowest nonzero rows are distinct.

    Columns listed in ``skip`` are zeroed without work (clearing).
    """
    skip = frozenset(skip)
    if matrix.p == 2:
        packed = [sum(1 << r for r in col) for col in matrix.columns]
        return _reduce_gf2(packed, skip)
    return _reduce_fp(matrix.columns, matrix.p, skip)


@dataclass
class Pairing:
    """Persistence pairs ``(d-simplex, (d+1)-simplex)`` and essential ``d``-simplices, per degree."""

    pairs: dict = field(default_factory=dict)
    essential: dict = field(default_factory=dict)
    column_additions: int = 0
    cleared: int = 0

    def key(self):
        return (
            {d: sorted(v) for d, v in self.pairs.items() if v},
            {d: sorted(v) for d, v in self.essential.items() if v},
        )

    def same_as(self, other: "Pairing") -> bool:
        return self.key() == other.key()


def compute_pairing(
    x: FilteredComplex, p: int = 2, clearing: bool = False, direction: str = "homology"
) -> Pairing:
    if direction == "homology":
        out = _pairing_homology(x, p, clearing)
    elif direction == "cohomology":
        out = _pairing_cohomology(x, p, clearing)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    log.debug("pairing %s clearing=%s: %d column additions, %d cleared",
              direction, clearing, out.column_additions, out.cleared)
    return out


def _pairing_homology(x: FilteredComplex, p: int, clearing: bool) -> Pairing:
    out = Pairing()
    zero = {0: list(x.simplices(0))}
    killed = {}  # d -> d-simplices that are pivots of the degree d+1 boundary
    for d in range(x.dim, 0, -1):
        b = boundary_matrix(x, d, p)
        skip = set()
        if clearing and killed.get(d):
            pos = {s: k for k, s in enumerate(b.cols)}
            skip = {pos[s] for s in killed[d]}
        res = reduce(b, skip)
        out.column_additions += res.column_additions
        out.cleared += res.cleared
        out.pairs[d - 1] = [(b.rows[r], b.cols[c]) for r, c in res.pairs]
        killed[d - 1] = {b.rows[r] for r, _ in res.pairs}
        zero[d] = [b.cols[j] for j in res.zero_columns()]
    for d in range(x.dim + 1):
        out.pairs.setdefault(d, [])
        out.essential[d] = [s for s in zero[d] if s not in killed.get(d, ())]
    return out


def _pairing_cohomology(x: FilteredComplex, p: int, clearing: bool) -> Pairing:
    out = Pairing()
    lows_prev = set()
    for d in range(0, x.dim + 1):
        c = coboundary_matrix(x, d, p)
        skip = set()
        if clearing and lows_prev:
            pos = {s: k for k, s in enumerate(c.cols)}
            skip = {pos[s] for s in lows_prev}
        res = reduce(c, skip)
        out.column_additions += res.column_additions
        out.cleared += res.cleared
        out.pairs[d] = [(c.cols[j], c.rows[r]) for r, j in res.pairs]
        zero = [c.cols[j] for j in res.zero_columns()]
        out.essential[d] = [s for s in zero if s not in lows_prev]
        lows_prev = {c.rows[r] for r, _ in res.pairs}
    return out


def reduce_with_clearing(x: FilteredComplex, p: int = 2, direction: str = "cohomology") -> Pairing:
    return compute_pairing(x, p, clearing=True, direction=direction)


def pairing_barcode(x: FilteredComplex, pairing: Pairing, d: int) -> Barcode:
    """Closed-bar convention: a class killed at grade ``g`` lives until ``g - 1``."""
    u = x.universe
    g = x.grades
    intervals = []
    for birth, death in pairing.pairs.get(d, []):
        if g[birth] < g[death]:
            intervals.append((g[birth], g[death] - 1))
    intervals += [(g[s], x.top) for s in pairing.essential.get(d, [])]
    return Barcode.from_intervals(u, [Interval(a, b, u) for a, b in sorted(intervals)])


def absolute_barcodes(
    x: FilteredComplex, d: int, p: int = 2, variant: str = "homology", clearing: bool = False
) -> Barcode:
    if variant not in ("homology", "cohomology"):
        raise ValueError(f"unknown variant {variant!r}")
    return pairing_barcode(x, compute_pairing(x, p, clearing, variant), d)


# ------------------------------------------------------------- pointwise oracle


def _embed(columns: np.ndarray, mask: np.ndarray, n: int) -> np.ndarray:
    out = fp.zeros(n, columns.shape[1])
    out[np.nonzero(mask)[0]] = columns
    return out


def homology_spaces(x: FilteredComplex, d: int, p: int = 2, relative: bool = False):
    """Cycle and boundary subspaces of ``C_d(K)`` at every grade.

    Absolute: ``Z(K_t)`` and ``B(K_t)``. Relative: chains with boundary in
    ``K_t`` and ``B(K) + C_d(K_t)``. Both increase with ``t`` inside the
    fixed ambient ``C_d(K)``.
    """
    n = len(x.simplices(d))
    bd = dense_boundary(x, d, p)
    bd_up = dense_boundary(x, d + 1, p) if x.simplices(d + 1) else fp.zeros(n, 0)
    g_d = np.array([x.grades[s] for s in x.simplices(d)], dtype=np.int64)
    g_down = np.array([x.grades[s] for s in x.simplices(d - 1)], dtype=np.int64) if d > 0 else np.zeros(0, dtype=np.int64)
    g_up = np.array([x.grades[s] for s in x.simplices(d + 1)], dtype=np.int64)
    upper, lower = [], []
    for t in range(x.top + 1):
        in_d = g_d <= t
        if relative:
            outside = g_down > t
            upper.append(fp.null_space(bd[outside], p) if n else fp.zeros(0, 0))
            lower.append(fp.column_basis(np.concatenate([bd_up, fp.eye(n)[:, in_d]], axis=1), p))
        else:
            z = fp.null_space(bd[:, in_d], p)
            upper.append(_embed(z, in_d, n))
            lower.append(fp.column_basis(bd_up[:, g_up <= t], p))
    return upper, lower


def pointwise_module(x: FilteredComplex, d: int, p: int = 2, relative: bool = False) -> PersistenceModule:
    """``t -> H_d(K_t)`` (or ``H_d(K, K_t)``) with induced maps, by linear algebra at each grade."""
    return pointwise_subquotient(x, d, p, relative).module


def pointwise_subquotient(x: FilteredComplex, d: int, p: int = 2, relative: bool = False):
    upper, lower = homology_spaces(x, d, p, relative)
    ambient = constant_module(len(x.simplices(d)), x.top, p)
    return subquotient(ambient, upper, lower)


def relative_barcodes(
    x: FilteredComplex, d: int, p: int = 2, variant: str = "homology", method: str = "oracle"
) -> Barcode:
    """Barcode of ``t -> H_d(K, K_t)``.

    ``oracle`` decomposes the pointwise quotient-complex module;
    ``correspondence`` reads it off absolute barcodes: bounded bars of
    degree ``d-1`` are kept and each essential bar ``[a, N]`` of degree
    ``d`` becomes ``[0, a-1]``. Cohomology has the same bars as homology.
    """
    if variant not in ("homology", "cohomology"):
        raise ValueError(f"unknown variant {variant!r}")
    u = x.universe
    if method == "oracle":
        return barcode_of(pointwise_module(x, d, p, relative=True))
    if method != "correspondence":
        raise ValueError(f"unknown method {method!r}")
    intervals = []
    if d > 0:
        intervals += [k for k in absolute_barcodes(x, d - 1, p).intervals() if k[1] < x.top]
    intervals += [(0, a - 1) for a, b in absolute_barcodes(x, d, p).intervals() if b == x.top]
    return Barcode.from_intervals(u, [Interval(a, b, u) for a, b in sorted(intervals)])

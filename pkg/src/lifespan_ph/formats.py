"""Text formats for filtrations, barcodes, modules and vertex maps.

Every printer emits a canonical form: parsing it gives the object back, and
printing a parsed canonical file reproduces it byte for byte. ``#`` starts a
comment in every format; blank lines are ignored.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import fp
from .barcode import Bar, Barcode
from .homology import FilteredComplex
from .order import IndexUniverse, Interval
from .pmod import PersistenceModule


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.line = line


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if body:
            yield n, body


def _int(token: str, n: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer {what}, got {token!r}", n) from None


# ---------------------------------------------------------------- filtration


def parse_filtration(text: str) -> FilteredComplex:
    top = None
    grades = {}
    for n, tok in _lines(text):
        if tok[0] == "grid":
            if top is not None:
                raise ParseError("repeated grid header", n)
            if len(tok) != 2:
                raise ParseError("grid header takes exactly one value", n)
            top = _int(tok[1], n, "grid size")
            if top < 1:
                raise ParseError("grid size must be at least 1", n)
        elif tok[0] == "simplex":
            if top is None:
                raise ParseError("simplex line before the grid header", n)
            if len(tok) < 3:
                raise ParseError("simplex line needs a grade and at least one vertex", n)
            grade = _int(tok[1], n, "grade")
            if not 1 <= grade <= top:
                raise ParseError(f"grade {grade} outside 1..{top}", n)
            verts = [_int(v, n, "vertex id") for v in tok[2:]]
            key = tuple(sorted(verts))
            if len(set(key)) != len(key):
                raise ParseError("repeated vertex in simplex", n)
            if key in grades:
                raise ParseError(f"simplex {' '.join(map(str, key))} listed twice", n)
            grades[key] = grade
        else:
            raise ParseError(f"unknown record {tok[0]!r}", n)
    if top is None:
        raise ParseError("missing grid header")
    return FilteredComplex(top, grades)


def print_filtration(x: FilteredComplex) -> str:
    out = [f"grid {x.top}"]
    for s in sorted(x.grades, key=lambda s: (len(s), x.grades[s], s)):
        out.append(f"simplex {x.grades[s]} {' '.join(map(str, s))}")
    return "\n".join(out) + "\n"


# ------------------------------------------------------------------ barcodes


def _bound(token: str, n: int):
    if token == "inf":
        return math.inf
    if token == "-inf":
        return -math.inf
    return _int(token, n, "endpoint")


def _show(b) -> str:
    if b == math.inf:
        return "inf"
    if b == -math.inf:
        return "-inf"
    return str(b)


def _tag(token: str):
    try:
        return int(token)
    except ValueError:
        return token


@dataclass(frozen=True)
class BarcodeFile:
    """Barcodes of several degrees; ``universe`` is ``None`` when undeclared."""

    universe: IndexUniverse | None
    barcodes: dict  # degree -> Barcode

    def __getitem__(self, degree: int) -> Barcode:
        return self.barcodes[degree]

    def degrees(self) -> list[int]:
        return sorted(self.barcodes)


def _universe_for(entries, universe):
    if universe is not None:
        return universe
    bounds = [b for _, lo, hi, _ in entries for b in (lo, hi)]
    if any(math.isinf(b) for b in bounds):
        return IndexUniverse.integers()
    return IndexUniverse.grid(max(bounds, default=0))


def parse_barcode(text: str, universe: IndexUniverse | None = None) -> BarcodeFile:
    """Parse ``[grid N | integers]`` then ``<degree> <lo> <hi> [tag]`` lines.

    Without a header, ``universe`` (if given) is used for building the
    barcodes; otherwise the smallest fitting grid, or the integers when an
    infinite endpoint appears. Untagged bars are numbered within their degree.
    """
    declared = None
    entries = []
    for n, tok in _lines(text):
        if tok[0] in ("grid", "integers"):
            if declared is not None or entries:
                raise ParseError("universe header must come first and only once", n)
            if tok[0] == "grid":
                if len(tok) != 2:
                    raise ParseError("grid header takes exactly one value", n)
                declared = IndexUniverse.grid(_int(tok[1], n, "grid size"))
            else:
                if len(tok) != 1:
                    raise ParseError("integers header takes no value", n)
                declared = IndexUniverse.integers()
            continue
        if len(tok) not in (3, 4):
            raise ParseError("bar line is '<degree> <lo> <hi> [tag]'", n)
        d = _int(tok[0], n, "degree")
        if d < 0:
            raise ParseError("degree must be non-negative", n)
        entries.append((d, _bound(tok[1], n), _bound(tok[2], n), _tag(tok[3]) if len(tok) == 4 else None, n))
    u = declared or _universe_for([e[:4] for e in entries], universe)
    by_degree: dict[int, list] = {}
    for d, lo, hi, tag, n in entries:
        bars = by_degree.setdefault(d, [])
        try:
            interval = Interval(lo, hi, u)
        except ValueError as exc:
            raise ParseError(str(exc), n) from None
        bars.append(Bar(interval, len(bars) if tag is None else tag))
    out = {}
    for d, bars in by_degree.items():
        try:
            out[d] = Barcode(u, tuple(bars))
        except ValueError as exc:
            raise ParseError(f"degree {d}: {exc}") from None
    return BarcodeFile(declared, out)


def _positional(barcode: Barcode) -> bool:
    return [b.tag for b in barcode] == list(range(len(barcode)))


def print_barcode(barcodes, universe: IndexUniverse | None = None, header: bool = True) -> str:
    """Accepts a :class:`BarcodeFile`, a ``{degree: Barcode}`` dict or ``(degree, Barcode)``."""
    if isinstance(barcodes, BarcodeFile):
        universe = barcodes.universe if universe is None else universe
        barcodes = barcodes.barcodes
    elif isinstance(barcodes, tuple):
        barcodes = {barcodes[0]: barcodes[1]}
    out = []
    if header and universe is not None:
        out.append(f"grid {universe.top}" if universe.is_grid else "integers")
    for d in sorted(barcodes):
        bc = barcodes[d]
        tagged = not _positional(bc)
        for bar in bc:
            line = f"{d} {_show(bar.lo)} {_show(bar.hi)}"
            if tagged:
                line += f" {bar.tag}"
            out.append(line)
    return "".join(line + "\n" for line in out)


def _json_bound(b):
    return _show(b) if isinstance(b, float) else b


def _from_json_bound(b):
    if isinstance(b, str):
        if b not in ("inf", "-inf"):
            raise ParseError(f"bad endpoint {b!r}")
        return math.inf if b == "inf" else -math.inf
    return int(b)


def barcode_to_json(bf: BarcodeFile) -> str:
    u = bf.universe
    doc = {
        "universe": None if u is None else ({"kind": "grid", "top": u.top} if u.is_grid else {"kind": "integers"}),
        "bars": [
            {"degree": d, "lo": _json_bound(b.lo), "hi": _json_bound(b.hi), "tag": b.tag}
            for d in bf.degrees()
            for b in bf[d]
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def barcode_from_json(text: str) -> BarcodeFile:
    try:
        doc = json.loads(text)
        uspec = doc["universe"]
        u = None if uspec is None else IndexUniverse(uspec["kind"], uspec.get("top"))
        rows = [(r["degree"], _from_json_bound(r["lo"]), _from_json_bound(r["hi"]), r["tag"]) for r in doc["bars"]]
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ParseError(f"malformed structured barcode: {exc}") from None
    build = u or _universe_for(rows, None)
    by_degree: dict[int, list] = {}
    for d, lo, hi, tag in rows:
        by_degree.setdefault(d, []).append(Bar(Interval(lo, hi, build), tag))
    return BarcodeFile(u, {d: Barcode(build, tuple(bars)) for d, bars in by_degree.items()})


# ------------------------------------------------------------------- modules


def parse_module(text: str) -> PersistenceModule:
    p, dims, layout = 2, None, None
    steps: dict[int, np.ndarray] = {}
    current = None  # (t, rows read so far)
    for n, tok in _lines(text):
        head = tok[0]
        if head == "prime":
            p = _int(tok[1], n, "prime")
            if not fp.is_prime(p):
                raise ParseError(f"{p} is not prime", n)
        elif head == "dims":
            dims = [_int(v, n, "dimension") for v in tok[1:]]
            if not dims or min(dims) < 0:
                raise ParseError("dims needs at least one non-negative value", n)
            steps = {t: fp.zeros(dims[t + 1], dims[t]) for t in range(len(dims) - 1)}
        elif head == "format":
            if dims is None:
                raise ParseError("format line before dims", n)
            if len(tok) != 2 or tok[1] not in ("dense", "sparse"):
                raise ParseError("format is 'dense' or 'sparse'", n)
            layout = tok[1]
        elif head == "step" and layout == "dense":
            t = _int(tok[1], n, "step index")
            if t not in steps:
                raise ParseError(f"no step {t} for {len(dims)} positions", n)
            current = [t, 0]
        elif head == "entry" and layout == "sparse":
            if len(tok) != 5:
                raise ParseError("entry line is 'entry <t> <row> <col> <value>'", n)
            t, i, j, v = (_int(x, n, "entry field") for x in tok[1:])
            if t not in steps or not (0 <= i < dims[t + 1] and 0 <= j < dims[t]):
                raise ParseError("entry outside the declared shape", n)
            steps[t][i, j] = v % p
        elif layout == "dense" and current is not None:
            t, r = current
            if r >= dims[t + 1] or len(tok) != dims[t]:
                raise ParseError(f"step {t} expects {dims[t + 1]} rows of {dims[t]} entries", n)
            steps[t][r] = [_int(v, n, "entry") % p for v in tok]
            current[1] += 1
        else:
            raise ParseError(f"unexpected record {head!r}", n)
    if dims is None or layout is None:
        raise ParseError("module needs dims and format lines")
    try:
        return PersistenceModule(tuple(dims), tuple(steps[t] for t in range(len(dims) - 1)), p)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def print_module(m: PersistenceModule, layout: str = "dense") -> str:
    out = [f"prime {m.p}", "dims " + " ".join(map(str, m.dims)), f"format {layout}"]
    for t, a in enumerate(m.steps):
        if layout == "dense":
            out.append(f"step {t}")
            if a.shape[1]:
                out += [" ".join(str(int(v)) for v in row) for row in a]
        else:
            for i, j in zip(*np.nonzero(a)):
                out.append(f"entry {t} {i} {j} {int(a[i, j])}")
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------- vertex maps


def parse_map(text: str) -> dict:
    seen_header = False
    vmap = {}
    for n, tok in _lines(text):
        if not seen_header:
            if tok != ["map"]:
                raise ParseError("expected 'map' header", n)
            seen_header = True
            continue
        if tok[0] != "vertex" or len(tok) != 3:
            raise ParseError("map line is 'vertex <l_id> <k_id>'", n)
        src = _int(tok[1], n, "vertex id")
        if src in vmap:
            raise ParseError(f"vertex {src} mapped twice", n)
        vmap[src] = _int(tok[2], n, "vertex id")
    if not seen_header:
        raise ParseError("expected 'map' header")
    return vmap


def print_map(vmap: dict) -> str:
    return "map\n" + "".join(f"vertex {k} {vmap[k]}\n" for k in sorted(vmap))


def sniff(text: str) -> str:
    """Guess the kind of a text file: ``filtration``, ``map``, ``module`` or ``barcode``."""
    heads = [tok[0] for _, tok in _lines(text)]
    if not heads:
        return "barcode"
    if heads[0] == "map":
        return "map"
    if heads[0] in ("prime", "dims"):
        return "module"
    if "simplex" in heads or (heads == ["grid"]):
        return "filtration"
    return "barcode"

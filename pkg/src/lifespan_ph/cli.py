"""Command-line entry point (``lifespan-ph``).

Exit codes: 0 success, 1 parse or validation error, 2 a check failed,
3 an input is valid but outside the hypotheses of the requested route.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import formats, homology, imgpipe, samples
from .barcode import Barcode
from .formats import BarcodeFile, ParseError
from .lifespan import Complement, LifespanFunctor, complement, part
from .fp import is_prime
from .pmod import (
    barcode_of,
    compare,
    complement_module,
    dual_lifespan_check,
    lifespan_barcode_check,
    lifespan_part_module,
)

PRIME_ENV = "LIFESPAN_PH_PRIME"

EXIT_OK, EXIT_INVALID, EXIT_CHECK, EXIT_PRECONDITION = 0, 1, 2, 3

log = logging.getLogger("lifespan_ph")


class CheckFailed(Exception):
    pass


def _default_prime() -> int:
    raw = os.environ.get(PRIME_ENV)
    if raw is None:
        return 2
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"{PRIME_ENV}={raw!r} is not an integer") from None


def _prime(args) -> int:
    p = args.prime if args.prime is not None else _default_prime()
    if not is_prime(p):
        raise ParseError(f"{p} is not prime")
    return p


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _with_source(path: str, fn, *a):
    try:
        return fn(_read(path), *a)
    except ParseError as exc:
        raise ParseError(f"{path}:{str(exc).lstrip()}" if exc.line is not None else f"{path}: {exc}") from None
    except ValueError as exc:
        if isinstance(exc, imgpipe.PreconditionError):
            raise
        raise ParseError(f"{path}: {exc}") from None


def _write(args, text: str):
    if args.output and args.output != "-":
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _morphism(args) -> imgpipe.FiltrationMorphism:
    source = _with_source(args.source, formats.parse_filtration)
    target = _with_source(args.target, formats.parse_filtration)
    vmap = _with_source(args.map, formats.parse_map) if args.map else {}
    try:
        return imgpipe.FiltrationMorphism(source, target, vmap)
    except imgpipe.PreconditionError:
        raise
    except ValueError as exc:
        raise ParseError(f"invalid morphism: {exc}") from None


# ------------------------------------------------------------------ commands


def cmd_phom(args) -> int:
    x = _with_source(args.filtration, formats.parse_filtration)
    p = _prime(args)
    degrees = [args.degree] if args.degree is not None else list(range(x.dim + 1 + (args.variant == "rel")))
    variant = "cohomology" if args.cohomology else "homology"
    if args.clearing:
        direction = variant
        plain = homology.compute_pairing(x, p, clearing=False, direction=direction)
        cleared = homology.compute_pairing(x, p, clearing=True, direction=direction)
        log.info(
            "column additions: %d without clearing, %d with clearing (%d columns cleared)",
            plain.column_additions, cleared.column_additions, cleared.cleared,
        )
    out = {}
    for d in degrees:
        if args.variant == "rel":
            out[d] = homology.relative_barcodes(x, d, p, variant, method="oracle")
        else:
            out[d] = homology.absolute_barcodes(x, d, p, variant, clearing=args.clearing)
    _write(args, formats.print_barcode(out, header=False))
    return EXIT_OK


_PARTS = {f.value: f for f in LifespanFunctor} | {c.value: c for c in Complement}


def cmd_lifespan(args) -> int:
    bf = _with_source(args.barcode, formats.parse_barcode)
    if bf.universe is None:
        raise ParseError(f"{args.barcode}: a universe header ('grid N' or 'integers') is required")
    which = _PARTS[args.part]
    out = {}
    for d in bf.degrees():
        b = bf[d]
        try:
            res = part(b, which) if isinstance(which, LifespanFunctor) else complement(b, which)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        out[d] = _positional(res)
    _write(args, formats.print_barcode(out, header=False))
    return EXIT_OK


def _positional(b: Barcode) -> Barcode:
    """Keep bar order, renumber tags ``0..n-1``."""
    return Barcode.from_intervals(b.universe, [bar.interval for bar in b])


def cmd_image(args) -> int:
    f = _morphism(args)
    p = _prime(args)
    if args.command == "image":
        result = imgpipe.image_barcode(f, args.degree, p, args.method)
        if args.check:
            methods = ["direct", "relcoh"] + (["fast"] if f.kind == "inclusion" else [])
            for m in methods:
                other = imgpipe.image_barcode(f, args.degree, p, m)
                if not compare(m, other, result).ok:
                    raise CheckFailed(f"method {m} gives {other}, {args.method} gives {result}")
    elif args.command == "kernel":
        result = imgpipe.kernel_barcode(f, args.degree, p)
    else:
        result = imgpipe.cokernel_barcode(f, args.degree, p)
    _write(args, formats.print_barcode((args.degree, result), header=False))
    return EXIT_OK


def cmd_oracle(args) -> int:
    m = _with_source(args.module, formats.parse_module)
    if args.part:
        which = _PARTS[args.part]
        m = lifespan_part_module(m, which) if isinstance(which, LifespanFunctor) else complement_module(m, which)
    _write(args, formats.print_barcode(BarcodeFile(m.universe, {0: barcode_of(m)})))
    return EXIT_OK


def cmd_gen_vr(args) -> int:
    try:
        pts = samples.parse_points(_read(args.points))
    except ValueError as exc:
        raise ParseError(f"{args.points}: {exc}") from None
    if not args.threshold > 0:
        raise ParseError("threshold must be positive")
    x = samples.vietoris_rips(pts, args.threshold, args.max_dim, args.grid, cap=args.cap)
    _write(args, formats.print_filtration(x))
    return EXIT_OK


# -------------------------------------------------------------------- verify


def _round_trip(path: str, text: str, kind: str, report: imgpipe.DualityReport):
    parse = {"filtration": formats.parse_filtration, "barcode": formats.parse_barcode,
             "module": formats.parse_module, "map": formats.parse_map}[kind]
    show = {"filtration": formats.print_filtration, "barcode": formats.print_barcode,
            "module": formats.print_module, "map": formats.print_map}[kind]
    obj = parse(text)
    again = show(obj)
    same = show(parse(again)) == again
    report.add(imgpipe.boolean_check(f"{path}: parse/print round trip", same))
    return obj


def cmd_verify(args) -> int:
    p = _prime(args)
    suites = (args.suite,)
    report = imgpipe.DualityReport()
    filtrations, barcode_files, maps, modules = [], [], [], []
    for path in args.inputs:
        text = _read(path)
        kind = formats.sniff(text)
        try:
            obj = _round_trip(path, text, kind, report)
        except ParseError as exc:
            raise ParseError(f"{path}:{str(exc).lstrip()}") from None
        except ValueError as exc:
            raise ParseError(f"{path}: {exc}") from None
        {"filtration": filtrations, "barcode": barcode_files, "map": maps, "module": modules}[kind].append((path, obj))
    if args.seed is not None:
        rng = np.random.default_rng(args.seed)
        pts = samples.random_points(rng, int(rng.integers(3, 9)))
        top = int(rng.integers(3, 9))
        k = samples.vietoris_rips(pts, float(rng.uniform(0.3, 0.8)), 2, top, cap=True)
        filtrations += [("seeded-L", _capped_sub(rng, k)), ("seeded-K", k)]
    if len(filtrations) == 2 and (maps or args.seed is not None or not barcode_files):
        vmap = maps[0][1] if maps else {}
        f = imgpipe.FiltrationMorphism(filtrations[0][1], filtrations[1][1], vmap)
        report.extend(imgpipe.verify_morphism(f, p, suites).outcomes)
    else:
        for path, x in filtrations:
            report.extend(imgpipe.verify_complex(x, p, suites).outcomes)
    if filtrations and barcode_files and len(filtrations) == 1:
        x = filtrations[0][1]
        for path, bf in barcode_files:
            for d in sorted(set(bf.degrees()) | set(range(x.dim + 1))):
                u = x.universe
                expected = homology.absolute_barcodes(x, d, p)
                given = bf.barcodes.get(d, Barcode.empty(u))
                if given.universe != u:
                    given = Barcode.from_intervals(u, given.intervals())
                report.add(compare(f"{path}: H_{d} matches {filtrations[0][0]}", given, expected))
    else:
        for path, bf in barcode_files:
            for d in bf.degrees():
                report.extend(imgpipe.verify_barcode(bf[d], p, suites, f"{path} degree {d}").outcomes)
    for path, m in modules:
        b = barcode_of(m)
        report.extend(imgpipe.verify_barcode(b, m.p, suites, path).outcomes)
        if suites[0] in ("all", "lifespan"):
            report.extend(lifespan_barcode_check(m))
            report.extend(dual_lifespan_check(m))
    for o in report.outcomes:
        line = {"pass": "PASS", "fail": "FAIL", "precondition-not-met": "SKIP"}[o.status] + f" {o.name}"
        if o.status == "fail" and o.left is not None:
            line += f"\n    left:  {o.left}\n    right: {o.right}"
        elif o.detail:
            line += f" ({o.detail})"
        print(line)
    n_fail = len(report.failures())
    print(f"{len(report.outcomes)} checks, {n_fail} failed")
    if args.report:
        doc = {"ok": report.ok, "checks": report.as_records()}
        Path(args.report).write_text(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK if report.ok else EXIT_CHECK


def _capped_sub(rng, k):
    """Random subfiltration of a coned complex that keeps the cone."""
    apex = max(k.vertices)
    base = homology.FilteredComplex(k.top, {s: g for s, g in k.grades.items() if apex not in s})
    sub = samples.random_subfiltration(rng, base)
    return homology.cone(sub, apex)


# ---------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lifespan-ph", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    def out(p):
        p.add_argument("-o", "--output", help="write here instead of stdout")

    def prime(p):
        p.add_argument("--prime", type=int, help=f"field characteristic (default: ${PRIME_ENV} or 2)")

    p = sub.add_parser("phom", help="persistent (co)homology barcodes of a filtration")
    p.add_argument("filtration")
    p.add_argument("--degree", type=int)
    p.add_argument("--variant", choices=("abs", "rel"), default="abs")
    p.add_argument("--cohomology", action="store_true")
    p.add_argument("--clearing", action="store_true")
    prime(p), out(p)
    p.set_defaults(run=cmd_phom)

    p = sub.add_parser("lifespan", help="apply a lifespan functor or complement to a barcode file")
    p.add_argument("barcode")
    p.add_argument("--part", required=True, choices=sorted(_PARTS))
    out(p)
    p.set_defaults(run=cmd_lifespan)

    for name in ("image", "kernel", "cokernel"):
        p = sub.add_parser(name, help=f"{name} barcode of the map induced by L -> K")
        p.add_argument("source", help="filtration L")
        p.add_argument("target", help="filtration K")
        p.add_argument("map", nargs="?", help="vertex map (omit for an inclusion)")
        p.add_argument("--degree", type=int, default=0)
        if name == "image":
            p.add_argument("--method", choices=("direct", "fast", "relcoh"), default="direct")
            p.add_argument("--check", action="store_true", help="cross-check every applicable method")
        prime(p), out(p)
        p.set_defaults(run=cmd_image)

    p = sub.add_parser("verify", help="run the check suites on the given inputs")
    p.add_argument("inputs", nargs="*")
    p.add_argument("--suite", choices=("all", "barcode", "lifespan", "duality", "image"), default="all")
    p.add_argument("--seed", type=int, help="add a seeded random cone-capped inclusion pair")
    p.add_argument("--report", help="write a structured report (JSON) here")
    prime(p)
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("oracle", help="barcode of a persistence module file by the rank oracle")
    p.add_argument("module")
    p.add_argument("--part", choices=sorted(_PARTS))
    out(p)
    p.set_defaults(run=cmd_oracle)

    p = sub.add_parser("gen-vr", help="Vietoris-Rips filtration of a point cloud")
    p.add_argument("points")
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--max-dim", type=int, default=2)
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--cap", action="store_true", help="cone off the complex at the top grade")
    out(p)
    p.set_defaults(run=cmd_gen_vr)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose or getattr(args, "clearing", False) else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr, force=True)
    try:
        return args.run(args)
    except imgpipe.PreconditionError as exc:
        print(f"precondition not met: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except CheckFailed as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (ParseError, ValueError) as exc:
        print(f"error: {str(exc).strip()}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

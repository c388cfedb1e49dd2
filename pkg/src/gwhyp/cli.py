"""Command-line front end.

    gwhyp invariant "Y;N=4;l=5;d=1;ins=1.0"
    gwhyp cy --ambient-dim 4 --hyp-degree 5 --max-degree 3
    gwhyp relative --ambient-dim 2 --hyp-degree 1 --degree 2 --multiplicity 2 \\
        --insertions 0.0,2.0,2.0,2.0,2.0
    gwhyp verify --level fast
    gwhyp cache merge a.cache b.cache out.cache

Exit codes: 0 ok, 1 compute failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import verify
from .algebra import Geometry
from .cache import CacheConflict, CacheFormatError, CacheStore, load, merge, save
from .keys import KeyParseError, canonicalize, parse, rel_key, serialize, vdim
from .relative import Engine

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE = 0, 1, 2

RESTRICTED_CAVEAT = (
    "only classes restricted from the ambient space are supported on Y; "
    "values are restricted invariants (sums over curve classes of Y with "
    "the given degree)"
)


class UsageError(Exception):
    pass


def _fraction_json(v):
    return {"num": v.numerator, "den": v.denominator}


def _geometry_json(N, l):
    out = {"N": N, "l": l, "restrictedOnly": False}
    if l is not None:
        out["restrictedOnly"] = Geometry(N, l).restricted_only
        if out["restrictedOnly"]:
            out["caveat"] = RESTRICTED_CAVEAT
    return out


def _emit(args, text, payload):
    if args.quiet:
        return
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _key_report(key, value, engine):
    return {
        "key": serialize(key),
        "value": _fraction_json(value),
        "vdim": vdim(key),
        "geometry": _geometry_json(key.N, key.l),
        "cacheHits": engine.cache_hits,
    }


def _open_engine(args):
    store = CacheStore()
    if args.cache and Path(args.cache).exists():
        store = load(args.cache)
    return Engine(store)


def _close_engine(args, engine):
    if args.cache:
        save(engine.store, args.cache)


def _evaluate_and_print(args, key):
    engine = _open_engine(args)
    value = engine.evaluate(key)
    _close_engine(args, engine)
    _emit(args, f"{serialize(key)} = {value}", _key_report(key, value, engine))


def cmd_invariant(args):
    try:
        key = parse(args.key)
    except KeyParseError as exc:
        raise UsageError(str(exc)) from None
    if canonicalize(key) != key:
        raise UsageError(f"key is not canonical; use {serialize(canonicalize(key))}")
    _evaluate_and_print(args, key)


def _parse_insertions(text):
    if not text:
        return []
    out = []
    for tok in text.split(","):
        exp, dot, psi = tok.partition(".")
        if not exp.isdigit() or (dot and not psi.isdigit()):
            raise UsageError(f"bad insertion {tok!r}; expected exp or exp.psi")
        out.append((int(exp), int(psi or 0)))
    return out


def cmd_relative(args):
    try:
        key = rel_key(
            args.ambient_dim, args.hyp_degree, args.degree, args.multiplicity,
            _parse_insertions(args.insertions),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _evaluate_and_print(args, key)


def cmd_cy(args):
    if args.max_degree < 1:
        raise UsageError("--max-degree must be >= 1")
    try:
        geom = Geometry(args.ambient_dim, args.hyp_degree)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    engine = _open_engine(args)
    try:
        rows = verify.cy_table(engine, geom.N, geom.l, args.max_degree)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _close_engine(args, engine)
    lines = [f"{'d':>3}  {'I_d':>28}  {'n_d':>20}"]
    lines += [f"{d:>3}  {str(I):>28}  {str(n):>20}" for d, I, n in rows]
    payload = {
        "geometry": _geometry_json(geom.N, geom.l),
        "rows": [{"d": d, "I": _fraction_json(I), "n": _fraction_json(n)} for d, I, n in rows],
        "cacheHits": engine.cache_hits,
    }
    _emit(args, "\n".join(lines), payload)


def cmd_verify(args):
    store = load(args.cache) if args.cache and Path(args.cache).exists() else None
    report = verify.run(args.level, store)
    if not args.quiet:
        print(json.dumps(report, sort_keys=True, indent=None if args.json else 2))
    return EXIT_OK if report["ok"] else EXIT_COMPUTE


def cmd_cache_merge(args):
    stores = [load(p) for p in args.inputs]
    out = CacheStore()
    for s in stores:
        out = merge(out, s)
    save(out, args.output)
    _emit(args, f"{len(out)} entries written to {args.output}",
          {"entries": len(out), "output": args.output})


def build_parser():
    p = argparse.ArgumentParser(prog="gwhyp", description="Genus-zero invariants of hypersurfaces")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache", metavar="PATH", help="cache file to read and update")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--quiet", action="store_true", help="suppress normal output")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("invariant", parents=[common], help="evaluate one key")
    s.add_argument("key")
    s.set_defaults(func=cmd_invariant)

    s = sub.add_parser("cy", parents=[common], help="I_d and n_d of a Calabi-Yau threefold")
    s.add_argument("--ambient-dim", type=int, required=True)
    s.add_argument("--hyp-degree", type=int, required=True)
    s.add_argument("--max-degree", type=int, required=True)
    s.set_defaults(func=cmd_cy)

    s = sub.add_parser("relative", parents=[common], help="relative invariant with tangency at slot 1")
    s.add_argument("--ambient-dim", type=int, required=True)
    s.add_argument("--hyp-degree", type=int, required=True)
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--multiplicity", type=int, required=True)
    s.add_argument("--insertions", default="", help="comma list of exp or exp.psi")
    s.set_defaults(func=cmd_relative)

    s = sub.add_parser("verify", parents=[common], help="run the self-checks")
    s.add_argument("--level", choices=["fast", "full"], default="fast")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("cache", help="cache maintenance")
    csub = s.add_subparsers(dest="cache_command", required=True)
    m = csub.add_parser("merge", parents=[common], help="merge cache files")
    m.add_argument("inputs", nargs="+")
    m.add_argument("output")
    m.set_defaults(func=cmd_cache_merge)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        code = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CacheConflict, CacheFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (ValueError, ArithmeticError, RecursionError, RuntimeError) as exc:
        print(f"error: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())

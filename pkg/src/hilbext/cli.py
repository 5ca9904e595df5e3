"""Command-line entry point: ``hilbext {ext,cohom,yoneda,spherical,verify}``."""

from __future__ import annotations

import argparse
import json
import random
import sys

from hilbext import cli_io
from hilbext.ext_calculator import (
    Det,
    HilbExtSpace,
    MissingDataError,
    SerreFlags,
    Taut,
    UNIT,
    parse_object_spec,
    spherical_report,
)
from hilbext.graded_core import poly_text

OK, COMPUTATION_ERROR, VERIFY_FAILED = 0, 1, 2


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise ValueError(f"--{name.replace('_', '-')} is required")


def _spec(ctx, text):
    obj = parse_object_spec(text)
    syms = [obj.obj, obj.line] if isinstance(obj, Taut) else [obj.line]
    for s in syms:
        if not ctx.has_object(s):
            raise ValueError(f"unknown object symbol {s!r}")
    return obj


def _print_space(space: HilbExtSpace, out):
    for line in space.listing():
        print(line, file=out)
    print(f"poincare: {poly_text(space.dims)}", file=out)


def cmd_ext(args, out):
    _need(args, "ctx", "n", "source", "target")
    ctx = cli_io.parse_context(args.ctx)
    _print_space(HilbExtSpace(ctx, _spec(ctx, args.source), _spec(ctx, args.target), args.n), out)


def cmd_cohom(args, out):
    _need(args, "ctx", "n", "target")
    ctx = cli_io.parse_context(args.ctx)
    _print_space(HilbExtSpace(ctx, Det(UNIT), _spec(ctx, args.target), args.n), out)


def cmd_yoneda(args, out):
    from hilbext.yoneda_engine import yoneda_product

    _need(args, "ctx", "n", "class_")
    ctx = cli_io.parse_context(args.ctx)
    a, b = cli_io.parse_classes(args.class_, ctx, args.n)
    result = yoneda_product(ctx, args.n, a, b, engine=args.engine)
    print(json.dumps(cli_io.class_to_dict(result), indent=1), file=out)


def cmd_spherical(args, out):
    _need(args, "ctx", "n", "source")
    ctx = cli_io.parse_context(args.ctx)
    obj = _spec(ctx, args.source)
    if not isinstance(obj, Taut):
        raise ValueError("spherical expects a taut:<obj>,<line> source")
    flags = SerreFlags() if args.serre else None
    rep = spherical_report(ctx, obj.obj, obj.line, args.n, flags)
    print(f"dims: {poly_text(rep.dims)}", file=out)
    print(f"verdict: {rep.verdict}", file=out)
    print(f"witnesses: {' '.join(map(str, rep.witnesses)) or '-'}", file=out)
    print(f"guaranteed: {'yes' if rep.guaranteed else 'no'}", file=out)
    for note in rep.notes:
        print(f"note: {note}", file=out)


def cmd_verify(args, out):
    from hilbext import verify

    rng = random.Random(args.seed)
    lines, ok = verify.run_suite(args.suite, args.max_n, rng)
    for line in lines:
        print(line, file=out)
    print("verified" if ok else "FAILED", file=out)
    return OK if ok else VERIFY_FAILED


def build_parser():
    p = argparse.ArgumentParser(prog="hilbext", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("ext", "cohom", "yoneda", "spherical", "verify"):
        s = sub.add_parser(name)
        s.add_argument("--ctx")
        s.add_argument("--n", type=int)
        s.add_argument("--source")
        s.add_argument("--target")
        s.add_argument("--class", dest="class_")
        s.add_argument("--suite", choices=["reps", "complex", "yoneda", "graded"], default="graded")
        s.add_argument("--max-n", type=int, default=4)
        s.add_argument("--seed", type=int, default=0)
        if name == "yoneda":
            s.add_argument("--engine", choices=["auto", "closed", "oracle"], default="auto")
        if name == "spherical":
            s.add_argument("--serre", action="store_true",
                           help="assert h0(O)=h2(O)=1 and nonzero Ext^0, Ext^2 of the object")
    return p


COMMANDS = {"ext": cmd_ext, "cohom": cmd_cohom, "yoneda": cmd_yoneda,
            "spherical": cmd_spherical, "verify": cmd_verify}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.command != "verify" and args.n is not None and args.n < 2:
        print("error: n must be at least 2 for Hilbert scheme queries", file=sys.stderr)
        return COMPUTATION_ERROR
    try:
        code = COMMANDS[args.command](args, out)
    except (cli_io.ContextError, MissingDataError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return COMPUTATION_ERROR
    return code or OK


if __name__ == "__main__":
    sys.exit(main())

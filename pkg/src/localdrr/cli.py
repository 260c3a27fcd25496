"""Command-line front end: ``localdrr {cc,cocycle,detD,lie,verify} ...``.

Results go to stdout, diagnostics to stderr.  Exit codes: 0 success,
1 computation error or failed verification, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .ccsymbol import SymbolMismatchError, cc_by_reduction, cc_exact
from .cocycles import adaptive, named_two_cocycle
from .detext import closed_form, det_cocycle_report, lie_extract
from .laurent import DEFAULT_PREC, NotInvertibleError, PrecisionError, working_precision
from .nilring import RingError
from .parser import ParseError, parse_ring, parse_value
from .verify import SUITES, run_suite

PAIR_NAMES = ("LL", "LO", "OO", "D")


class UsageError(Exception):
    pass


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--ring", default=None, help="coefficient ring, e.g. 'Q[e1^2=0, e2^3=0; cap=6]' (default Q)")
    parser.add_argument("--prec", type=int, default=DEFAULT_PREC,
                        help=f"default series precision (default {DEFAULT_PREC})")
    parser.add_argument("--json", nargs="?", const="-", default=None, metavar="PATH",
                        help="write a JSON report to PATH ('-' or no value: stdout)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="localdrr", description="Exact computations with loop-group cocycles.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("cc", help="the symbol CC(f, g) of two invertible series")
    _common(s)
    s.add_argument("--f", required=True, help="first series")
    s.add_argument("--g", required=True, help="second series")
    s.add_argument("--method", choices=("exact", "explog", "both"), default="exact")

    s = sub.add_parser("cocycle", help="evaluate a 2-cocycle on two group elements")
    _common(s)
    s.add_argument("--pair", choices=PAIR_NAMES, required=True)
    s.add_argument("--x", required=True, help="group element '(h=...; phi=...)'")
    s.add_argument("--y", required=True, help="group element '(h=...; phi=...)'")

    s = sub.add_parser("detD", help="the determinant cocycle with its window data")
    _common(s)
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.add_argument("--window", type=int, default=None, help="window size L (default: derived)")

    s = sub.add_parser("lie", help="Lie-algebra 2-cocycle by extraction from the group cocycle")
    _common(s)
    s.add_argument("--cocycle", choices=PAIR_NAMES, required=True)
    s.add_argument("--z", required=True, help="Lie element '(s=...; r=...)' meaning s + r d/dt")
    s.add_argument("--w", required=True)

    s = sub.add_parser("verify", help="run verification suites")
    _common(s)
    s.add_argument("--suite", choices=SUITES + ("all",), required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cases", type=int, default=None,
                   help="number of cases (for lie_tables: the bound on |n|, |m|)")
    s.add_argument("--timing", action="store_true",
                   help="record wall time in the JSON report (otherwise millis is 0, keeping output reproducible)")
    return p


def _parse(text: str, kind: str, ring, what: str):
    try:
        return parse_value(text, kind, ring)
    except ParseError as exc:
        raise UsageError(f"cannot parse {what}: {exc}") from None


def _emit_json(target: str, payload) -> None:
    text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if target == "-":
        sys.stdout.write(text)
    else:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_cc(args, ring) -> int:
    f = _parse(args.f, "series", ring, "--f")
    g = _parse(args.g, "series", ring, "--g")
    values = {}
    if args.method in ("exact", "both"):
        values["exact"] = adaptive(lambda: cc_exact(f, g))
    if args.method in ("explog", "both"):
        values["explog"] = adaptive(lambda: cc_by_reduction(f, g))
    if args.method == "both" and values["exact"] != values["explog"]:
        raise SymbolMismatchError(f"product formula gave {values['exact']}, exp/log gave {values['explog']}")
    value = next(iter(values.values()))
    _report(args, {"command": "cc", "ring": str(ring), "f": str(f), "g": str(g), "method": args.method,
                   "value": str(value)}, str(value))
    return 0


def _cmd_cocycle(args, ring) -> int:
    x = _parse(args.x, "group", ring, "--x")
    y = _parse(args.y, "group", ring, "--y")
    value = named_two_cocycle(args.pair)(x, y)
    _report(args, {"command": "cocycle", "ring": str(ring), "pair": args.pair, "x": str(x), "y": str(y),
                   "value": str(value)}, str(value))
    return 0


def _cmd_detd(args, ring) -> int:
    x = _parse(args.x, "group", ring, "--x")
    y = _parse(args.y, "group", ring, "--y")
    if args.window is not None and args.window < 1:
        raise UsageError("--window must be >= 1")
    rep = det_cocycle_report(x, y, window=args.window)
    print(f"slope {rep.beta}, reach {rep.reach}, n {rep.n}, window {rep.L}", file=sys.stderr)
    _report(args, {"command": "detD", "ring": str(ring), "x": str(x), "y": str(y), "value": str(rep.value),
                   "slope": str(rep.beta), "reach": rep.reach, "n": rep.n, "window": rep.L}, str(rep.value))
    return 0


def _cmd_lie(args, ring) -> int:
    z = _parse(args.z, "lie", ring, "--z")
    w = _parse(args.w, "lie", ring, "--w")
    value = lie_extract(named_two_cocycle(args.cocycle), z, w)
    closed = closed_form(args.cocycle, z, w)
    if closed != value:
        print(f"warning: closed form gives {closed}", file=sys.stderr)
    _report(args, {"command": "lie", "ring": str(ring), "cocycle": args.cocycle, "z": str(z), "w": str(w),
                   "value": str(value), "closed_form": str(closed)}, str(value))
    return 0 if closed == value else 1


def _cmd_verify(args, ring) -> int:
    names = SUITES if args.suite == "all" else (args.suite,)
    reports = []
    for name in names:
        rep = run_suite(name, ring=ring, seed=args.seed, cases=args.cases)
        reports.append(rep)
        out = sys.stderr if args.json == "-" else sys.stdout
        print(rep.summary(), file=out)
        for note in rep.notes:
            print(f"  {note}", file=out)
        for fail in rep.failures[:10]:
            print(f"  case {fail.index}: {fail.check}: {fail.lhs} != {fail.rhs}", file=sys.stderr)
    if args.json is not None:
        payload = [r.as_json(timing=args.timing) for r in reports]
        _emit_json(args.json, payload[0] if len(payload) == 1 else payload)
    return 0 if all(r.ok for r in reports) else 1


def _report(args, payload: dict, text: str):
    if args.json is not None:
        _emit_json(args.json, payload)
        if args.json == "-":
            return
    print(text)


COMMANDS = {"cc": _cmd_cc, "cocycle": _cmd_cocycle, "detD": _cmd_detd, "lie": _cmd_lie, "verify": _cmd_verify}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.prec < 1:
        print("error: --prec must be >= 1", file=sys.stderr)
        return 2
    try:
        if args.ring is not None:
            ring = parse_ring(args.ring)
        else:
            # verify suites pick their own default ring
            ring = None if args.command == "verify" else parse_ring("Q")
    except ParseError as exc:
        print(f"error: cannot parse --ring: {exc}", file=sys.stderr)
        return 2
    try:
        with working_precision(args.prec):
            return COMMANDS[args.command](args, ring)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NotInvertibleError as exc:
        print(f"error: not invertible: {exc}", file=sys.stderr)
        return 1
    except PrecisionError as exc:
        hint = f"; retry with --prec {exc.required}" if exc.required else ""
        print(f"error: precision exhausted: {exc}{hint}", file=sys.stderr)
        return 1
    except (ArithmeticError, RingError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

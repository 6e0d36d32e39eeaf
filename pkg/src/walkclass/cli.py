"""Command line interface.

Exit codes: 0 on any successful run (including an Inconclusive
classification), 2 on input errors, 1 on numerical failures."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .model import parse_model
from .kernel import KernelContext, KernelError
from .curve import CurveError
from .uniformization import UniformizationError, tau_order_on_curve, uniformize
from .group import GroupError, group_report, orbit_sum_on_curve
from .series import SeriesError, critical_t, walk_dp
from .classify import classify, emit_csv, emit_report

_NUMERIC_ERRORS = (KernelError, CurveError, UniformizationError, GroupError,
                   SeriesError)


def _load_model(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r") as fh:
            text = fh.read()
    return parse_model(text)


def _parse_t(s: str) -> Fraction:
    t = Fraction(s)
    if not (0 < t < 1):
        raise ValueError("t must lie strictly between 0 and 1, got %s" % s)
    return t


def _print(data, as_json: bool):
    if as_json:
        sys.stdout.write(json.dumps(data, indent=2) + "\n")
    else:
        for key, value in data.items():
            sys.stdout.write("%s: %s\n" % (key, value))


def _fmt(v):
    if isinstance(v, complex):
        return "%.12g%+.12gj" % (v.real, v.imag)
    if isinstance(v, float):
        return "%.12g" % v
    if isinstance(v, (list, tuple)):
        return "[%s]" % ", ".join(str(_fmt(x)) for x in v)
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="walkclass",
        description="Classify weighted small-step quarter-plane walk models.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, with_t=True):
        sp.add_argument("model", help="path to a model JSON file, or - for stdin")
        if with_t:
            sp.add_argument("--t", required=True, metavar="p/q",
                            help="time value in (0,1), e.g. 1/2 or 0.96")
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true", help="JSON output")
        fmt.add_argument("--text", action="store_true",
                         help="human-readable output (default)")

    sp = sub.add_parser("classify", help="full decision pipeline")
    add_common(sp)
    sp.add_argument("--cap", type=int, default=24,
                    help="largest group order searched (default 24)")
    sp.add_argument("--tol", type=float, default=1e-7,
                    help="orbit-sum zero tolerance on the curve")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=32,
                    help="curve sample count for the orbit sum")
    sp.add_argument("--emit-csv", metavar="DIR",
                    help="write unit-circle path traces as CSV files")

    sp = sub.add_parser("uniformize", help="periods and invariants of the curve")
    add_common(sp)

    sp = sub.add_parser("series", help="exact counting layers")
    add_common(sp)
    sp.add_argument("--order", type=int, required=True, metavar="K",
                    help="truncation order")

    sp = sub.add_parser("orbit-sum", help="group and orbit sum")
    add_common(sp, with_t=False)
    sp.add_argument("--t", metavar="p/q",
                    help="also evaluate the orbit sum on the curve at this t")
    sp.add_argument("--cap", type=int, default=24)
    sp.add_argument("--tol", type=float, default=1e-7)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=32)

    sp = sub.add_parser("critical-t", help="critical point of the jump polynomial")
    add_common(sp, with_t=False)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    as_json = bool(args.json)
    try:
        w = _load_model(args.model)
        t = _parse_t(args.t) if getattr(args, "t", None) else None
    except (OSError, ValueError) as exc:
        sys.stderr.write("input error: %s\n" % exc)
        return 2

    try:
        if args.command == "classify":
            report = classify(w, t, cap=args.cap, tol=args.tol,
                              seed=args.seed, samples=args.samples)
            sys.stdout.write(
                emit_report(report, "json" if as_json else "text").decode())
            if args.emit_csv:
                try:
                    files = emit_csv(KernelContext(w, t), args.emit_csv)
                except _NUMERIC_ERRORS as exc:
                    sys.stderr.write("csv emission failed: %s\n" % exc)
                    return 1
                sys.stderr.write("wrote %d path files under %s\n"
                                 % (len(files), args.emit_csv))
            return 0

        if args.command == "uniformize":
            unif = uniformize(KernelContext(w, t))
            data = unif.summary()
            order = tau_order_on_curve(unif)
            data["translation_order"] = None if order is None else order[0]
            _print({k: _fmt(v) for k, v in data.items()} if not as_json
                   else data, as_json)
            return 0

        if args.command == "series":
            if args.order < 0:
                sys.stderr.write("input error: --order must be >= 0\n")
                return 2
            dp = walk_dp(w, args.order)
            corner = [str(dp.q(0, 0, k)) for k in range(args.order + 1)]
            mass = [str(dp.mass(k)) for k in range(args.order + 1)]
            if as_json:
                _print({"order": args.order, "corner": corner, "mass": mass},
                       True)
            else:
                sys.stdout.write("k\tq(0,0,k)\tmass\n")
                for k in range(args.order + 1):
                    sys.stdout.write("%d\t%s\t%s\n" % (k, corner[k], mass[k]))
            return 0

        if args.command == "orbit-sum":
            rep = group_report(w, cap=args.cap, seed=args.seed)
            data = rep.to_json_dict()
            if t is not None:
                unif = uniformize(KernelContext(w, t))
                order = tau_order_on_curve(unif, cap=args.cap)
                if order is None:
                    data["curve"] = "no finite order within cap %d" % args.cap
                else:
                    max_abs, is_zero = orbit_sum_on_curve(
                        unif, order[0], samples=args.samples,
                        tol=args.tol, seed=args.seed)
                    data["curve"] = {
                        "translation_order": order[0],
                        "max_abs": max_abs,
                        "zero": is_zero,
                    }
            if as_json:
                _print(data, True)
            else:
                for key, value in data.items():
                    if key == "orbit_sum_witnesses":
                        sys.stdout.write("orbit_sum_witnesses:\n")
                        for wit in value:
                            sys.stdout.write("  (x,y)=(%s, %s) -> %s\n"
                                             % (wit["probe"][0],
                                                wit["probe"][1],
                                                wit["value"]))
                    elif isinstance(value, dict):
                        sys.stdout.write("%s:\n" % key)
                        for k2, v2 in value.items():
                            sys.stdout.write("  %s: %s\n" % (k2, _fmt(v2)))
                    else:
                        sys.stdout.write("%s: %s\n" % (key, value))
            return 0

        if args.command == "critical-t":
            cp = critical_t(w)
            data = {"x0": cp.x0, "y0": cp.y0, "t0": cp.t0}
            if not as_json:
                data = {k: _fmt(v) for k, v in data.items()}
            _print(data, as_json)
            return 0
    except _NUMERIC_ERRORS as exc:
        sys.stderr.write("numerical failure: %s\n" % exc)
        return 1
    raise AssertionError("unhandled command %r" % args.command)


if __name__ == "__main__":
    sys.exit(main())

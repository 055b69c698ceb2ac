"""
prefspace/commands/trace.py

Trace commands (CSV on stdout):
  trace sequence   → one utility sequence probed at n = 1, 2, 4, ... and its limit
  trace path       → three-step path sampled on [0, 1]
  trace contour    → opens of the contour topology of one preference (JSON)
"""
import argparse
import csv
import json
import sys
from fractions import Fraction

from prefspace.core.errors import UsageError
from prefspace.core.exogenous import contour_topology
from prefspace.core.order import UtilityVector, WeakOrder
from prefspace.core.paths import (
    flatten_global,
    flatten_middle,
    path_rows,
    prop1_sequence,
    prop3_case_sequence,
    three_step_path,
    trace_rows,
    verify_sequence,
)
from prefspace.schemas.objects import FiniteTopologySchema


def parse_vector(text: str) -> UtilityVector:
    try:
        return UtilityVector(tuple(Fraction(part.strip()) for part in text.split(",") if part.strip()))
    except ValueError as e:
        raise UsageError(f"Cannot parse utility vector {text!r}.") from e


def _require(value, flag: str, kind: str):
    if value is None:
        raise UsageError(f"{flag} is required for {kind}.")
    return value


def handle_sequence(args: argparse.Namespace) -> int:
    u = parse_vector(args.u)
    if args.kind == "flatten_global":
        seq = flatten_global(u)
    elif args.kind == "flatten_middle":
        seq = flatten_middle(u, _require(args.x, "--x", args.kind), _require(args.y, "--y", args.kind))
    elif args.kind == "prop1":
        seq = prop1_sequence(u, _require(args.x, "--x", args.kind), _require(args.y, "--y", args.kind))
    else:
        seq = prop3_case_sequence(u, _require(args.x, "--x", args.kind), args.case)
    report = verify_sequence(seq, args.tolerance, args.depth)
    csv.writer(sys.stdout, lineterminator="\n").writerows(trace_rows(report))
    return 0 if report.passed else 1


def handle_path(args: argparse.Namespace) -> int:
    path = three_step_path(parse_vector(args.u), parse_vector(args.v))
    csv.writer(sys.stdout, lineterminator="\n").writerows(path_rows(path, args.samples))
    return 0


def handle_contour(args: argparse.Namespace) -> int:
    try:
        p = WeakOrder.parse(args.order)
    except ValueError as e:
        raise UsageError(f"Cannot parse preference {args.order!r}: {e}") from e
    body = {"order": p.label(), **FiniteTopologySchema.from_core(contour_topology(p)).model_dump()}
    print(json.dumps(body, sort_keys=True))
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    p = subparsers.add_parser("trace", help="Trace utility sequences, paths and contour topologies")
    sub = p.add_subparsers(dest="trace_command", required=True)

    seq = sub.add_parser("sequence", help="Induced preference along a utility sequence")
    seq.add_argument("--kind", choices=["flatten_global", "flatten_middle", "prop1", "prop3"], required=True)
    seq.add_argument("--u", required=True, help="Comma-separated utilities, fractions allowed")
    seq.add_argument("--x", type=int)
    seq.add_argument("--y", type=int)
    seq.add_argument("--case", choices=["lower", "upper"], default="lower")
    seq.add_argument("--depth", type=int, default=10)
    seq.add_argument("--tolerance", type=float, default=1e-2)
    seq.set_defaults(handler=handle_sequence)

    path = sub.add_parser("path", help="Three-step path between two nonconstant vectors")
    path.add_argument("--u", required=True)
    path.add_argument("--v", required=True)
    path.add_argument("--samples", type=int, default=101)
    path.set_defaults(handler=handle_path)

    contour = sub.add_parser("contour", help="Contour topology of a preference such as '0~1>2'")
    contour.add_argument("--order", required=True)
    contour.set_defaults(handler=handle_contour)

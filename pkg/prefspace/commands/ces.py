"""
prefspace/commands/ces.py

Demand demo commands:
  ces limit          → CSV of max deviation per sigma
  ces compensation   → CSV scenario for a Leontief-compensated price change
  ces demand         → JSON closed-form and numeric demand
"""
import argparse
import csv
import json
import sys
from fractions import Fraction

from prefspace.commands.run import parse_floats
from prefspace.core.econ import (
    Budget,
    ces,
    cobb_douglas,
    compensation_check,
    compensation_rows,
    default_grid,
    demand_numeric,
    leontief,
    limit_check,
    limit_rows,
    relative_error,
)
from prefspace.core.errors import UsageError


def _kind(args: argparse.Namespace):
    if args.kind == "ces":
        if args.sigma is None:
            raise UsageError("--sigma is required for the ces kind.")
        return ces(args.alpha, args.sigma)
    return cobb_douglas(args.alpha) if args.kind == "cobb_douglas" else leontief(args.alpha)


def handle_limit(args: argparse.Namespace) -> int:
    grid = default_grid(args.grid_low, args.grid_high, args.points)
    report = limit_check(args.target, args.alpha, grid, parse_floats(args.sigmas))
    csv.writer(sys.stdout, lineterminator="\n").writerows(limit_rows(report))
    return 0


def handle_compensation(args: argparse.Namespace) -> int:
    budget = Budget(Fraction(args.p1), Fraction(args.p2), Fraction(args.w))
    report = compensation_check(Fraction(args.alpha), budget, (Fraction(args.new_p1), Fraction(args.new_p2)))
    csv.writer(sys.stdout, lineterminator="\n").writerows(compensation_rows(report))
    return 0


def handle_demand(args: argparse.Namespace) -> int:
    kind = _kind(args)
    budget = Budget(args.p1, args.p2, args.w)
    closed = kind.demand(budget)
    numeric = demand_numeric(kind, budget)
    body = {
        "kind": repr(kind),
        "closed_form": [float(v) for v in closed],
        "numeric": list(numeric),
        "relative_error": relative_error(closed, numeric),
    }
    print(json.dumps(body, sort_keys=True, indent=2))
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    p = subparsers.add_parser("ces", help="CES / Cobb-Douglas / Leontief demand demo")
    sub = p.add_subparsers(dest="ces_command", required=True)

    limit = sub.add_parser("limit", help="Deviation of CES from its limit along a sigma schedule")
    limit.add_argument("--target", choices=["cobb_douglas", "leontief"], required=True)
    limit.add_argument("--alpha", type=float, default=0.5)
    limit.add_argument("--sigmas", help="Comma-separated schedule (default per target)")
    limit.add_argument("--grid-low", type=float, default=0.1, dest="grid_low")
    limit.add_argument("--grid-high", type=float, default=10.0, dest="grid_high")
    limit.add_argument("--points", type=int, default=21)
    limit.set_defaults(handler=handle_limit)

    comp = sub.add_parser("compensation", help="Leontief-compensated price change")
    comp.add_argument("--alpha", default="1/2")
    comp.add_argument("--p1", default="1")
    comp.add_argument("--p2", default="1")
    comp.add_argument("--w", default="10")
    comp.add_argument("--new-p1", default="2", dest="new_p1")
    comp.add_argument("--new-p2", default="1", dest="new_p2")
    comp.set_defaults(handler=handle_compensation)

    dem = sub.add_parser("demand", help="Closed-form demand checked against the numeric oracle")
    dem.add_argument("--kind", choices=["ces", "cobb_douglas", "leontief"], required=True)
    dem.add_argument("--alpha", type=float, default=0.5)
    dem.add_argument("--sigma", type=float)
    dem.add_argument("--p1", type=float, default=1.0)
    dem.add_argument("--p2", type=float, default=1.0)
    dem.add_argument("--w", type=float, default=10.0)
    dem.set_defaults(handler=handle_demand)

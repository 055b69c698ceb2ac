"""
prefspace/commands/run.py

Claim commands:
  run           → execute claim checkers, print the manifest summary, exit 0/1
  list-claims   → catalog of claim ids with anchors and size ranges
"""
import argparse
import json
import logging
from typing import List, Optional

from prefspace.core.catalog import list_claims
from prefspace.core.errors import UsageError
from prefspace.core.harness import exit_code, run
from prefspace.schemas.run import RunConfig

logger = logging.getLogger(__name__)


# ── Helpers ───────────────────────────────────────────────────────────────────

def parse_sizes(text: Optional[str]) -> Optional[List[int]]:
    """``"2..4"`` or ``"2,3,5"``."""
    if text is None:
        return None
    try:
        if ".." in text:
            low, high = (int(part) for part in text.split("..", 1))
            return list(range(low, high + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise UsageError(f"Cannot parse sizes {text!r}; use '2..4' or '2,3'.") from e


def parse_floats(text: Optional[str]) -> Optional[List[float]]:
    if text is None:
        return None
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise UsageError(f"Cannot parse numbers {text!r}.") from e


def parse_names(text: Optional[str]) -> Optional[List[str]]:
    return None if text is None else [part.strip() for part in text.split(",") if part.strip()]


# ── run ───────────────────────────────────────────────────────────────────────

def handle_run(args: argparse.Namespace) -> int:
    config = RunConfig.load(args.config).with_overrides(
        {
            "n_range": parse_sizes(args.n),
            "claims": parse_names(args.claims),
            "seed": args.seed,
            "samples": args.samples,
            "epsilons": parse_floats(args.epsilons),
            "random_subsets": args.random_subsets,
            "workers": args.workers,
            "output_dir": args.out,
            "archive_url": args.archive,
            "reproducible": True if args.reproducible else None,
            "full_sweep": True if args.full_sweep else None,
        }
    )
    manifest = run(config)
    if args.json or not config.output_dir:
        print(manifest.to_json(), end="")
    else:
        for report in manifest.reports:
            status = "ok" if report.invariants_passed else "INVARIANT FAILURE"
            print(f"{report.claim:<24} n={report.n}  {report.verdict.value:<9}  {status}")
    return exit_code(manifest)


# ── list-claims ───────────────────────────────────────────────────────────────

def handle_list_claims(args: argparse.Namespace) -> int:
    entries = list_claims(args.module)
    if args.json:
        print(json.dumps([e.model_dump() for e in entries], sort_keys=True, indent=2))
        return 0
    for e in entries:
        print(f"{e.claim:<24} {e.anchor:<30} n={e.n_min}..{e.n_max}  [{e.module}]")
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    p = subparsers.add_parser("run", help="Run claim checkers and emit a manifest")
    p.add_argument("--config", help="JSON or TOML run config")
    p.add_argument("--claims", help="Comma-separated claim ids, or 'all'")
    p.add_argument("--n", help="Sizes: '2..4' or '2,3'")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int, help="Oracle random samples per realization")
    p.add_argument("--epsilons", help="Strictly decreasing comma-separated schedule")
    p.add_argument("--random-subsets", type=int, dest="random_subsets")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="Directory for manifest.json, reports/ and sweeps/")
    p.add_argument("--archive", help="SQLAlchemy URL or SQLite path to archive the run")
    p.add_argument("--reproducible", action="store_true", help="Zero runtimes and omit timestamps")
    p.add_argument("--full-sweep", action="store_true", dest="full_sweep", help="Every topology at n=4")
    p.add_argument("--json", action="store_true", help="Print the manifest even when writing files")
    p.set_defaults(handler=handle_run)

    q = subparsers.add_parser("list-claims", help="List claim ids with anchors and size ranges")
    q.add_argument("--json", action="store_true")
    q.add_argument("--module", help="Only claims of this module, e.g. final-topology")
    q.set_defaults(handler=handle_list_claims)

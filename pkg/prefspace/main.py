"""
prefspace/main.py — Command-line entry point

Registers:
  - run / list-claims   (claim checkers and catalog)
  - ces                 (demand demo)
  - trace               (sequences, paths, contour topologies)

Exit status: 0 when every invariant suite passes, 1 when one fails,
2 for usage, configuration and size-cap errors.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

from prefspace.commands import ces as ces_commands
from prefspace.commands import run as run_commands
from prefspace.commands import trace as trace_commands
from prefspace.config import settings
from prefspace.core.errors import PrefSpaceError, UsageError

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.APP_TITLE,
        description="Finite checks of the final topology on preferences.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.APP_VERSION}")
    parser.add_argument("--log-level", dest="log_level", help="Overrides PREFSPACE_LOG_LEVEL")
    subparsers = parser.add_subparsers(dest="command", required=True)
    run_commands.register(subparsers)
    ces_commands.register(subparsers)
    trace_commands.register(subparsers)
    return parser


def _fail(error: PrefSpaceError, status: int) -> int:
    print(json.dumps({"detail": error.detail}, sort_keys=True), file=sys.stderr)
    return status


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    level = (args.log_level or settings.LOG_LEVEL).upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except UsageError as e:
        return _fail(e, 2)
    except PrefSpaceError as e:
        logger.error(f"{e.code}: {e.message}")
        return _fail(e, 2)


if __name__ == "__main__":
    sys.exit(main())

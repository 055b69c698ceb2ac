"""
prefspace/core/harness.py — Runs claim checkers over a grid of sizes and assembles the manifest.

Reports are sorted by (claim, n) and serialized with sorted keys, so a fixed
config and seed give identical bytes once ``reproducible`` drops the clock.
"""
import json
import logging
import time
from datetime import datetime, timezone
from multiprocessing import Pool
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from prefspace.config import settings
from prefspace.core.catalog import get_claim
from prefspace.core.errors import SizeError, UsageError
from prefspace.schemas.reports import ClaimReport, RunManifest, SweepEntry, dump_report
from prefspace.schemas.run import RunConfig

logger = logging.getLogger(__name__)

Cell = Tuple[str, int]


def plan(config: RunConfig) -> List[Cell]:
    """(claim, n) cells to run; sizes outside a claim's range are skipped unless the claim was named."""
    cells: List[Cell] = []
    for claim in config.requested:
        entry = get_claim(claim)
        for n in config.n_range:
            if n > settings.ENUMERATION_CAP:
                raise SizeError(f"n={n} exceeds the enumeration cap {settings.ENUMERATION_CAP}.")
            if config.explicit and n > entry.n_max:
                raise SizeError(f"{claim} is capped at n={entry.n_max}, requested n={n}.")
            if entry.covers(n):
                cells.append((claim, n))
            else:
                logger.info(f"Skipping {claim} at n={n}: outside {entry.n_min}..{entry.n_max}")
        if config.explicit and not any(c == claim for c, _ in cells):
            raise UsageError(f"No requested size lies in {claim}'s range {entry.n_min}..{entry.n_max}.")
    return cells


def _run_cell(job: Tuple[str, int, dict]) -> Tuple[dict, Optional[List[dict]]]:
    claim, n, raw = job
    config = RunConfig.model_validate(raw)
    entry = get_claim(claim)
    started = time.perf_counter()
    report, sweep = entry.run(n, config.params_for(claim))
    elapsed = 0 if config.reproducible else int((time.perf_counter() - started) * 1000)
    report = report.model_copy(update={"runtime_ms": elapsed})
    logger.info(f"{claim} n={n}: {report.verdict.value} (invariants {'ok' if report.invariants_passed else 'FAILED'})")
    return report.model_dump(mode="json"), [e.model_dump(mode="json") for e in sweep] if sweep is not None else None


def run(config: RunConfig) -> RunManifest:
    """Execute every planned cell, write outputs when configured, archive when asked."""
    cells = plan(config)
    raw = config.model_dump(mode="json")
    jobs = [(claim, n, raw) for claim, n in cells]
    logger.info(f"Running {len(cells)} claim cells with {config.workers} worker(s), seed={config.seed}")
    started = time.perf_counter()
    if config.workers > 1 and len(jobs) > 1:
        with Pool(config.workers) as pool:
            results = pool.map(_run_cell, jobs)
    else:
        results = [_run_cell(job) for job in jobs]

    reports = sorted((ClaimReport.model_validate(r) for r, _ in results), key=lambda r: (r.claim, r.n))
    sweeps: Dict[Cell, List[SweepEntry]] = {
        (r["claim"], r["n"]): [SweepEntry.model_validate(e) for e in s] for r, s in results if s is not None
    }
    manifest = RunManifest(
        tool=settings.APP_TITLE,
        version=settings.APP_VERSION,
        config=raw,
        reports=reports,
        invariants_passed=all(r.invariants_passed for r in reports),
        total_runtime_ms=0 if config.reproducible else int((time.perf_counter() - started) * 1000),
        created_at=None if config.reproducible else datetime.now(tz=timezone.utc),
    )
    if config.output_dir:
        write_outputs(manifest, sweeps, Path(config.output_dir))
    archive_url = config.archive_url or settings.ARCHIVE_URL
    if archive_url:
        from prefspace.core.archive import archive

        archive(manifest, archive_url)
    failed = [f"{r.claim}@{r.n}" for r in reports if not r.invariants_passed]
    if failed:
        logger.error(f"Invariant failures: {', '.join(failed)}")
    logger.info(f"Run finished: {len(reports)} reports, invariants {'passed' if not failed else 'failed'}")
    return manifest


def write_outputs(manifest: RunManifest, sweeps: Dict[Cell, List[SweepEntry]], out: Path) -> None:
    """``manifest.json``, one JSON file per report, one per topology sweep."""
    (out / "reports").mkdir(parents=True, exist_ok=True)
    (out / "manifest.json").write_text(manifest.to_json(), encoding="utf-8")
    for report in manifest.reports:
        (out / "reports" / f"{report.claim}_n{report.n}.json").write_text(dump_report(report), encoding="utf-8")
    if sweeps:
        (out / "sweeps").mkdir(exist_ok=True)
    for (claim, n), entries in sorted(sweeps.items()):
        body = json.dumps([e.model_dump(mode="json") for e in entries], sort_keys=True, indent=2) + "\n"
        (out / "sweeps" / f"{claim}_n{n}.json").write_text(body, encoding="utf-8")
    logger.info(f"Wrote {len(manifest.reports)} reports to {out}")


def exit_code(manifest: RunManifest) -> int:
    """0 when every invariant suite passed; verdicts never change it."""
    return 0 if manifest.invariants_passed else 1

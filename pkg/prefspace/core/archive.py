"""
prefspace/core/archive.py — Persist run manifests and read them back.
"""
import logging
from typing import List, Optional

from sqlalchemy import select
from sqlalchemy.exc import OperationalError, SQLAlchemyError
from sqlalchemy.orm import Session

from prefspace.core.errors import ArchiveError
from prefspace.database import get_session, init_archive
from prefspace.models.run import ClaimRecord, RunRecord
from prefspace.schemas.reports import RunManifest

logger = logging.getLogger(__name__)


def save_manifest(db: Session, manifest: RunManifest) -> RunRecord:
    """Insert one run with its claim reports; commits on success, rolls back on failure."""
    try:
        run = RunRecord(
            tool=manifest.tool,
            version=manifest.version,
            seed=manifest.config.get("seed", 0),
            config=manifest.config,
            invariants_passed=manifest.invariants_passed,
            total_runtime_ms=manifest.total_runtime_ms,
        )
        if manifest.created_at is not None:
            run.created_at = manifest.created_at
        for report in manifest.reports:
            body = report.model_dump(mode="json")
            run.claims.append(
                ClaimRecord(
                    claim=report.claim,
                    n=report.n,
                    family=report.family,
                    verdict=report.verdict.value,
                    witness=body["witness"],
                    report=body,
                )
            )
        db.add(run)
        db.commit()
        db.refresh(run)
    except OperationalError as e:
        db.rollback()
        logger.error(f"Archive unavailable: {e}")
        raise ArchiveError("Database connection failed") from e
    except SQLAlchemyError as e:
        db.rollback()
        logger.error(f"Archive write failed: {e}")
        raise ArchiveError(f"Could not archive run: {e}") from e
    logger.info(f"Archived run {run.id} with {len(run.claims)} reports")
    return run


def list_runs(db: Session, limit: Optional[int] = None) -> List[RunRecord]:
    query = select(RunRecord).order_by(RunRecord.id.desc())
    if limit is not None:
        query = query.limit(limit)
    return list(db.scalars(query))


def archive(manifest: RunManifest, url: str) -> int:
    """Open the archive at ``url``, store ``manifest`` and return the new run id."""
    try:
        factory = init_archive(url)
    except SQLAlchemyError as e:
        raise ArchiveError(f"Cannot open archive: {e}") from e
    for db in get_session(factory):
        return save_manifest(db, manifest).id
    raise ArchiveError("No archive session could be opened.")

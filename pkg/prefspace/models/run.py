"""
prefspace/models/run.py

`runs` table, one row per archived manifest, and `claim_reports`, one row per
(claim, n) report of that run.
"""
from datetime import datetime, timezone
from typing import Any, Optional

from sqlalchemy import JSON, BigInteger, Boolean, DateTime, ForeignKey, Integer, String, func
from sqlalchemy.orm import Mapped, mapped_column, relationship

from prefspace.database import Base

# SQLite only autoincrements INTEGER primary keys
Id = BigInteger().with_variant(Integer, "sqlite")


class RunRecord(Base):
    __tablename__ = "runs"

    # ── Primary key ───────────────────────────────────────────────────────────
    id: Mapped[int] = mapped_column(Id, primary_key=True, autoincrement=True, index=True)

    # ── Provenance ────────────────────────────────────────────────────────────
    tool:    Mapped[str] = mapped_column(String(64), nullable=False)
    version: Mapped[str] = mapped_column(String(32), nullable=False)
    seed:    Mapped[int] = mapped_column(BigInteger, nullable=False)
    config:  Mapped[dict[str, Any]] = mapped_column(JSON, nullable=False)

    # ── Outcome ───────────────────────────────────────────────────────────────
    invariants_passed: Mapped[bool] = mapped_column(Boolean, nullable=False)
    total_runtime_ms:  Mapped[int] = mapped_column(BigInteger, nullable=False, default=0)

    # ── Timestamps ────────────────────────────────────────────────────────────
    created_at: Mapped[datetime] = mapped_column(
        DateTime(timezone=True),
        nullable=False,
        server_default=func.now(),
        default=lambda: datetime.now(tz=timezone.utc),
    )

    # ── Relationships ─────────────────────────────────────────────────────────
    claims: Mapped[list["ClaimRecord"]] = relationship(
        "ClaimRecord",
        back_populates="run",
        cascade="all, delete-orphan",
        order_by="ClaimRecord.id",
        lazy="selectin",   # loaded with the run in one extra query
    )

    def __repr__(self) -> str:
        return f"<RunRecord id={self.id} seed={self.seed} passed={self.invariants_passed}>"


class ClaimRecord(Base):
    __tablename__ = "claim_reports"

    id:     Mapped[int] = mapped_column(Id, primary_key=True, autoincrement=True, index=True)
    run_id: Mapped[int] = mapped_column(ForeignKey("runs.id", ondelete="CASCADE"), nullable=False, index=True)

    claim:   Mapped[str] = mapped_column(String(64), nullable=False, index=True)
    n:       Mapped[int] = mapped_column(Integer, nullable=False)
    family:  Mapped[str] = mapped_column(String(32), nullable=False)
    verdict: Mapped[str] = mapped_column(String(16), nullable=False)
    witness: Mapped[Optional[Any]] = mapped_column(JSON, nullable=True)
    report:  Mapped[dict[str, Any]] = mapped_column(JSON, nullable=False)

    run: Mapped[RunRecord] = relationship("RunRecord", back_populates="claims")

    def __repr__(self) -> str:
        return f"<ClaimRecord claim={self.claim!r} n={self.n} verdict={self.verdict}>"

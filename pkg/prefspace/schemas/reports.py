"""
prefspace/schemas/reports.py — Pydantic v2 schemas for claim reports, sweeps, the catalog and run manifests.
"""
import json
from datetime import datetime
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, field_serializer, model_validator


class Verdict(str, Enum):
    CONFIRMED = "CONFIRMED"
    REFUTED = "REFUTED"


# ─── Oracle evidence ──────────────────────────────────────────────────────────

class OracleEvidence(BaseModel):
    samples: int = Field(..., ge=1)
    epsilons: List[float]
    disagreements: int = Field(0, ge=0)
    probes: int = Field(0, ge=0)


# ─── Claim reports ────────────────────────────────────────────────────────────

class ClaimReport(BaseModel):
    """
    Verdict on one claim at one size.
    ``invariants`` holds the tool's own consistency checks; they decide the exit
    status, while the verdict is reported data.
    """
    claim: str
    n: int = Field(..., ge=1)
    family: str
    verdict: Verdict
    subverdicts: Dict[str, Any] = Field(default_factory=dict)
    witness: Optional[Any] = None
    oracle: OracleEvidence
    invariants: Dict[str, bool] = Field(default_factory=dict)
    seed: int
    runtime_ms: int = Field(0, ge=0)

    @model_validator(mode="after")
    def refuted_needs_witness(self) -> "ClaimReport":
        if self.verdict is Verdict.REFUTED and self.witness is None:
            raise ValueError(f"REFUTED report for {self.claim} at n={self.n} carries no witness.")
        return self

    @property
    def invariants_passed(self) -> bool:
        return all(self.invariants.values())

    @classmethod
    def build(
        cls,
        claim: str,
        n: int,
        family: str,
        confirmed: bool,
        params: Any,
        subverdicts: Optional[Dict[str, Any]] = None,
        witness: Any = None,
        invariants: Optional[Dict[str, bool]] = None,
        disagreements: int = 0,
        probes: int = 0,
    ) -> "ClaimReport":
        """``params`` is the checker's CheckParams (seed, samples, epsilons)."""
        return cls(
            claim=claim,
            n=n,
            family=family,
            verdict=Verdict.CONFIRMED if confirmed else Verdict.REFUTED,
            subverdicts=subverdicts or {},
            witness=None if confirmed else witness,
            oracle=OracleEvidence(
                samples=params.samples, epsilons=list(params.epsilons), disagreements=disagreements, probes=probes
            ),
            invariants=invariants or {},
            seed=params.seed,
        )


class SweepEntry(BaseModel):
    """One exogenous topology in a P^cls sweep, under both readings of local strictness."""
    topology_index: int
    opens: List[List[int]]
    pcls_size: int
    verdict: Verdict
    vacuous: bool
    pcls_size_offdiagonal: int
    verdict_offdiagonal: Verdict
    vacuous_offdiagonal: bool


class CatalogEntry(BaseModel):
    claim: str
    anchor: str
    module: str
    n_min: int
    n_max: int
    description: str


# ─── Run manifests ────────────────────────────────────────────────────────────

class RunManifest(BaseModel):
    tool: str
    version: str
    config: Dict[str, Any]
    reports: List[ClaimReport]
    invariants_passed: bool
    total_runtime_ms: int = Field(0, ge=0)
    created_at: Optional[datetime] = None

    @field_serializer("created_at")
    def serialize_created_at(self, v: Optional[datetime]) -> Optional[str]:
        return v.isoformat() if v else None

    def to_json(self) -> str:
        """Canonical bytes: sorted keys, fixed indentation."""
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def dump_report(report: ClaimReport) -> str:
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"

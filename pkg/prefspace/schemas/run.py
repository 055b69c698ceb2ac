"""
prefspace/schemas/run.py — RunConfig: one human-editable JSON or TOML file, overridable from the command line.
"""
import json

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator

from prefspace.config import settings
from prefspace.core.catalog import claim_ids, claim_index, get_claim
from prefspace.core.errors import UsageError
from prefspace.core.oracle import CheckParams

ALL = "all"


class RunConfig(BaseModel):
    n_range: List[int] = Field(default_factory=lambda: [2, 3], min_length=1)
    claims: List[str] = Field(default_factory=lambda: [ALL], min_length=1)
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)

    # ── Oracle ────────────────────────────────────────────────────────────────
    samples: int = Field(default_factory=lambda: settings.ORACLE_SAMPLES, ge=1)
    epsilons: List[float] = Field(default_factory=lambda: list(settings.oracle_epsilons), min_length=1)

    # ── Sampling and tolerances ───────────────────────────────────────────────
    random_subsets: int = Field(default_factory=lambda: settings.RANDOM_SUBSETS, ge=1)
    sweep_sample: int = Field(default_factory=lambda: settings.SWEEP_SAMPLE, ge=1)
    full_sweep: bool = False
    tolerance: float = Field(1e-9, gt=0)

    # ── Output ────────────────────────────────────────────────────────────────
    output_dir: Optional[str] = None
    reproducible: bool = False
    archive_url: Optional[str] = None
    workers: int = Field(1, ge=1)

    model_config = {"extra": "forbid"}

    @field_validator("n_range")
    @classmethod
    def sizes_positive(cls, v: List[int]) -> List[int]:
        if any(n < 1 for n in v):
            raise ValueError(f"sizes must be at least 1, got {v}")
        return sorted(set(v))

    @field_validator("claims")
    @classmethod
    def claims_known(cls, v: List[str]) -> List[str]:
        known = set(claim_ids())
        unknown = [c for c in v if c != ALL and c not in known]
        if unknown:
            raise ValueError(f"unknown claims {unknown}; known claims: {sorted(known)}")
        return v

    @field_validator("epsilons")
    @classmethod
    def epsilons_decreasing(cls, v: List[float]) -> List[float]:
        if any(e <= 0 for e in v):
            raise ValueError(f"epsilons must be positive, got {v}")
        if any(b >= a for a, b in zip(v, v[1:])):
            raise ValueError(f"epsilon schedule must be strictly decreasing, got {v}")
        return v

    @field_validator("archive_url")
    @classmethod
    def sqlite_path(cls, v: Optional[str]) -> Optional[str]:
        if v and "://" not in v:
            return f"sqlite:///{v}"
        return v or None

    @property
    def requested(self) -> List[str]:
        """Claim ids in catalog order; ``all`` expands to every claim."""
        if ALL in self.claims:
            return claim_ids()
        return [c for c in claim_ids() if c in self.claims]

    @property
    def explicit(self) -> bool:
        return ALL not in self.claims

    def params_for(self, claim: str) -> CheckParams:
        get_claim(claim)
        return CheckParams(
            seed=self.seed,
            samples=self.samples,
            epsilons=tuple(self.epsilons),
            random_subsets=self.random_subsets,
            sweep_sample=self.sweep_sample,
            full_sweep=self.full_sweep,
            tolerance=self.tolerance,
            claim_index=claim_index(claim),
        )

    def with_overrides(self, overrides: Dict[str, Any]) -> "RunConfig":
        """Flags set on the command line win over the file; ``None`` means not given."""
        merged = {**self.model_dump(), **{k: v for k, v in overrides.items() if v is not None}}
        return validated(merged)

    @classmethod
    def load(cls, path: Optional[str]) -> "RunConfig":
        if path is None:
            return cls()
        file = Path(path)
        try:
            text = file.read_text(encoding="utf-8")
            data = tomllib.loads(text) if file.suffix == ".toml" else json.loads(text)
        except (OSError, json.JSONDecodeError, tomllib.TOMLDecodeError) as e:
            raise UsageError(f"Cannot read config {path}: {e}") from e
        if not isinstance(data, dict):
            raise UsageError(f"Config {path} must hold a table of settings.")
        return validated(data)


def validated(data: Dict[str, Any]) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        messages = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
        raise UsageError(f"Invalid run config: {messages}") from e

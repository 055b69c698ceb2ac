"""
prefspace/config.py — Centralised settings loaded from environment variables / .env
"""
from typing import List, Tuple

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # ── Enumeration caps ──────────────────────────────────────────────────────
    # Pairwise refinement work grows with |P|^2; 6 alternatives is 4,683 weak orders
    ENUMERATION_CAP: int = 6
    TOPOLOGY_CAP: int = 4
    EXPLICIT_GROUND_CAP: int = 12

    # ── Randomness ────────────────────────────────────────────────────────────
    DEFAULT_SEED: int = 42

    # ── Numeric openness oracle ───────────────────────────────────────────────
    ORACLE_SAMPLES: int = 8
    ORACLE_EPSILONS: str = "0.25,0.05,0.01"

    # ── Sweeps ────────────────────────────────────────────────────────────────
    SWEEP_SAMPLE: int = 64
    RANDOM_SUBSETS: int = 500

    # ── Logging ───────────────────────────────────────────────────────────────
    LOG_LEVEL: str = "INFO"

    # ── Run archive (empty string disables it) ────────────────────────────────
    ARCHIVE_URL: str = ""

    # ── App info ──────────────────────────────────────────────────────────────
    APP_TITLE: str = "prefspace"
    APP_VERSION: str = "1.0.0"

    model_config = SettingsConfigDict(
        env_prefix="PREFSPACE_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    @field_validator("ARCHIVE_URL", mode="before")
    @classmethod
    def fix_sqlite_path(cls, v: str) -> str:
        """Accept a bare file path and turn it into a SQLite URL."""
        if isinstance(v, str) and v and "://" not in v:
            return f"sqlite:///{v}"
        return v

    @field_validator("LOG_LEVEL")
    @classmethod
    def upper_level(cls, v: str) -> str:
        return v.strip().upper()

    @property
    def oracle_epsilons(self) -> Tuple[float, ...]:
        """Parse the comma-separated epsilon schedule."""
        if not self.ORACLE_EPSILONS or not isinstance(self.ORACLE_EPSILONS, str):
            return ()
        parts: List[float] = [float(p) for p in self.ORACLE_EPSILONS.split(",") if p.strip()]
        return tuple(parts)


settings = Settings()

"""
Configuration Settings
======================
Centralized defaults table using Pydantic Settings.
Every numerical default used by the library and the CLI lives here.

Supports environment variables (prefix ``MODSPACE_``) and a ``.env`` file.
CLI flags override these values.
"""

from functools import lru_cache
from pathlib import Path
from typing import List, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Application settings with environment variable support.

    All settings can be overridden via ``MODSPACE_<NAME>`` environment
    variables or a .env file in the working directory.
    """

    model_config = SettingsConfigDict(
        env_prefix="MODSPACE_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        case_sensitive=False,
    )

    # === Application ===
    APP_NAME: str = "modspace"
    APP_VERSION: str = "1.0.0"

    # === Grids ===
    MAX_GRID_POINTS: int = Field(default=2**24, ge=64, description="Cap on M^n samples per field")
    MIN_SAMPLES: int = Field(default=8, description="Smallest admissible M")

    # === Decomposition ===
    WINDOW: str = Field(default="raised-cosine", description="Default window kind")

    # === Solver ===
    QUAD_NODES: int = Field(default=16, ge=1, description="Gauss-Legendre nodes per Duhamel integral")
    TIME_NODES: int = Field(default=9, ge=2, description="Trajectory sample count")
    PICARD_TOL: float = Field(default=1e-10, gt=0.0, description="Picard stopping tolerance")
    PICARD_MAX_ITER: int = Field(default=60, ge=1, description="Picard iteration cap")
    BLOWUP_FACTOR: float = Field(default=1e6, gt=1.0, description="Abort when norm exceeds factor * |u0|")
    ETD_ORDER: int = Field(default=2, ge=1, le=2, description="Exponential time differencing order")
    ETD_SUBSTEPS: int = Field(default=1, ge=1, description="ETD steps per trajectory interval")

    # === Probes ===
    WITNESS_QUAD_NODES: int = Field(default=32, ge=1, description="Quadrature nodes for the witness integral")
    INFLATION_SEP: int = Field(default=4, ge=2, description="Separation multiplier for the spread-out data")
    INFLATION_N_LIST: List[int] = Field(default=[8, 16, 32, 64])
    SMOOTHING_T_POINTS: int = Field(default=8, ge=3)
    SLOPE_TOLERANCE: float = Field(default=0.15, gt=0.0, description="Output-slope tolerance of the inflation probe")
    INPUT_SLOPE_TOLERANCE: float = Field(default=0.1, gt=0.0)
    EXPONENT_TOLERANCE: float = Field(default=0.2, gt=0.0, description="Inflation exponent tolerance")
    SMOOTHING_TOLERANCE: float = Field(default=0.1, gt=0.0)
    SMOOTHING_FAMILY_MAX: int = Field(default=256, ge=3)
    PRODUCT_TOLERANCE: float = Field(default=0.1, gt=0.0)
    ISOMORPHISM_TOLERANCE: float = Field(default=0.02, gt=0.0)
    DECAY_ENSEMBLE_SIZE: int = Field(default=16, ge=1)
    ENSEMBLE_SIZE: int = Field(default=24, ge=1)
    PRODUCT_BANDS: List[int] = Field(default=[16, 32, 64])
    SEED: int = Field(default=0, ge=0)

    # === Execution ===
    THREADS: int = Field(default=1, ge=1, description="Worker pool size for probe points")
    REPORT_TIMINGS: bool = Field(default=False, description="Embed wall-clock runtimes in reports")

    # === Probe cache ===
    CACHE_ENABLED: bool = Field(default=False, description="Memoize probe points on disk")
    CACHE_DIR: str = Field(default=".cache/modspace", description="Cache directory")
    CACHE_SIZE_LIMIT_MB: int = Field(default=500, description="Cache size limit (MB)")

    # === Logging ===
    LOG_LEVEL: str = Field(default="WARNING", description="Logging level")
    LOG_FILE: Optional[Path] = Field(default=None, description="Log file path (None = stderr only)")
    LOG_JSON: bool = Field(default=True, description="Use structured JSON logging")

    @field_validator("INFLATION_N_LIST", "PRODUCT_BANDS", mode="before")
    @classmethod
    def parse_int_list(cls, v):
        """Parse integer lists from comma separated strings."""
        if isinstance(v, str):
            return [int(item.strip()) for item in v.split(",") if item.strip()]
        return v

    @field_validator("WINDOW")
    @classmethod
    def check_window(cls, v: str) -> str:
        if v not in ("raised-cosine", "sharp"):
            raise ValueError(f"unknown window kind: {v}")
        return v


@lru_cache()
def get_settings() -> Settings:
    """
    Get cached settings instance.
    Settings are loaded once per process.
    """
    return Settings()

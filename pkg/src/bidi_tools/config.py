"""Runtime configuration for bidi-tools.

Values are read from ``BIDI_*`` environment variables and an optional
``.env`` file. Command-line flags take precedence over these settings.
"""

import logging
from functools import lru_cache
from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """Library and CLI settings."""

    model_config = {"env_prefix": "BIDI_", "env_file": ".env", "case_sensitive": False}

    log_level: str = Field(default="WARNING", description="Logging level")
    vertex_limit: int = Field(default=20, ge=1, le=20, description="Maximum number of variables")
    max_group_order: int = Field(
        default=40320, ge=1, description="Cap on the size of generated permutation groups"
    )
    max_workers: int = Field(default=4, ge=1, description="Threads for stepwise candidate fits")

    algorithm: Literal["icf", "gradient"] = "icf"
    tol_outer: float = Field(default=1e-8, gt=0)
    max_cycles: int = Field(default=500, ge=1)
    tol_inner: float = Field(default=1e-10, gt=0)
    max_inner_iters: int = Field(default=200, ge=1)
    inner_method: Literal["projected-newton", "gradient-projection"] = "projected-newton"

    @field_validator("log_level")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        """Normalize log level to uppercase for logging compatibility."""
        return v.upper()


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Return the process-wide settings instance."""
    return Settings()


def reset_settings() -> None:
    """Drop the cached settings so the environment is re-read."""
    get_settings.cache_clear()

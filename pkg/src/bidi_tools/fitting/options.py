"""Fit options shared by the ICF and gradient engines."""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..config import Settings, get_settings


class FitOptions(BaseModel):
    """Tolerances and switches for a single fit."""

    model_config = ConfigDict(frozen=True)

    algorithm: Literal["icf", "gradient"] = "icf"
    tol_outer: float = Field(default=1e-8, gt=0, description="Outer convergence tolerance")
    tol_inner: float = Field(default=1e-10, gt=0, description="Inner projected-gradient tolerance")
    tol_score: float = Field(default=1e-7, gt=0, description="Score certificate, times n_total")
    max_cycles: int = Field(default=500, ge=1)
    max_inner_iters: int = Field(default=200, ge=1)
    armijo_sigma: float = Field(default=1e-4, gt=0, lt=1)
    armijo_beta: float = Field(default=0.5, gt=0, lt=1)
    inner_method: Literal["projected-newton", "gradient-projection"] = "projected-newton"
    pseudo_count: Optional[float] = Field(default=None, description="Added to every cell")
    multi_start: int = Field(default=1, ge=1)
    seed: int = 0

    @field_validator("inner_method", mode="before")
    @classmethod
    def normalize_inner_method(cls, v: str) -> str:
        """Accept the short CLI spellings ``newton`` and ``gp``."""
        aliases = {"newton": "projected-newton", "gp": "gradient-projection"}
        return aliases.get(str(v).lower(), str(v).lower())

    @field_validator("pseudo_count")
    @classmethod
    def positive_pseudo_count(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and not v > 0:
            raise ValueError("pseudo_count must be positive when given")
        return v

    @classmethod
    def from_settings(cls, settings: Optional[Settings] = None, **overrides) -> "FitOptions":
        """Defaults from settings, then explicit overrides (``None`` values ignored)."""
        settings = settings or get_settings()
        values = {
            "algorithm": settings.algorithm,
            "tol_outer": settings.tol_outer,
            "tol_inner": settings.tol_inner,
            "max_cycles": settings.max_cycles,
            "max_inner_iters": settings.max_inner_iters,
            "inner_method": settings.inner_method,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

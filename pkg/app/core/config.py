"""
Application configuration.

Process-level settings are loaded from environment variables (or a .env
file) through pydantic-settings.  The analysis knobs live in
``AnalysisConfig``: a frozen, versioned model whose every field is echoed
into each report, so two runs with the same config are reproducible.
"""

from __future__ import annotations

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, ValidationError, field_validator
from pydantic_settings import BaseSettings

from app.core.errors import InvalidInput, IoError

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    # ── App ──────────────────────────────────────────────────────────
    APP_NAME: str = "pconvex"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    # ── Analysis defaults ────────────────────────────────────────────
    # Path of a JSON AnalysisConfig used when no --config is given.
    PCONVEX_CONFIG: str | None = None
    CONFIG_VERSION: str = "1"

    model_config = {"env_file": ".env", "extra": "ignore"}


settings = Settings()


class AnalysisConfig(BaseModel):
    """Knobs of the decision pipeline.  Defaults are frozen per ``version``."""

    version: str = "1"
    seed: int = 0

    # ── σ estimation ─────────────────────────────────────────────────
    sigma_threshold: float = Field(1e-3, gt=0)
    t_max: float = Field(float(2**20), ge=1)
    t_ratio_squared: int = Field(2, ge=2, description="grid points are sqrt(t_ratio_squared)**k")
    norm_mode: Literal["sup", "deriv"] = "sup"
    boundary_samples: int = Field(4096, ge=16)
    interior_grid: int = Field(33, ge=3)

    # ── Path family ──────────────────────────────────────────────────
    drift_count: int = Field(8, ge=0)
    sublinear_exponents: tuple[str, ...] = ("1/2", "2/3")
    sublinear_count: int = Field(4, ge=0)
    adaptive_drifts: bool = False
    null_search_bound: int = Field(1, ge=1, le=3)

    # ── Verdicts ─────────────────────────────────────────────────────
    min_principle_tol: float = Field(1e-9, ge=0)
    caveat_policy: Literal["accept", "downgrade"] = "accept"
    diagnostics: bool = True

    model_config = {"frozen": True, "extra": "forbid"}

    @field_validator("sublinear_exponents")
    @classmethod
    def _exponents_in_unit_interval(cls, value: tuple[str, ...]) -> tuple[str, ...]:
        for item in value:
            exponent = Fraction(item)
            if not 0 < exponent < 1:
                raise ValueError(f"sublinear exponent {item} must lie in (0, 1)")
        return value

    @property
    def exponents(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(item) for item in self.sublinear_exponents)

    def t_grid(self) -> tuple[float, ...]:
        """Geometric grid sqrt(ratio)^k from 1 up to ``t_max``; growing t_max only appends points."""
        grid: list[float] = []
        k = 0
        while True:
            t = float(self.t_ratio_squared) ** (k / 2)
            if t > self.t_max * (1 + 1e-12):
                break
            grid.append(t)
            k += 1
        return tuple(grid)

    def echo(self) -> dict:
        return self.model_dump(mode="json")


def load_analysis_config(path: str | Path | None = None) -> AnalysisConfig:
    """
    Resolve the analysis config.

    Precedence: explicit ``path`` > ``PCONVEX_CONFIG`` > frozen defaults.
    """
    source = path or settings.PCONVEX_CONFIG
    if source is None:
        return AnalysisConfig()

    config_path = Path(source)
    try:
        raw = config_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read config file {config_path}: {exc}") from exc
    if not raw.strip():
        raise IoError(f"config file {config_path} is empty")

    try:
        config = AnalysisConfig.model_validate(json.loads(raw))
    except (json.JSONDecodeError, ValidationError) as exc:
        raise InvalidInput(f"invalid config file {config_path}: {exc}") from exc

    logger.info("Loaded analysis config from %s (version %s)", config_path, config.version)
    return config

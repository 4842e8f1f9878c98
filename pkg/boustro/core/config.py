"""
Configuration models.

Every tunable of the planner lives here as a pydantic model. Files are JSON;
operator-facing speeds and durations are given in knots and hours and
converted to SI where the domain objects are built.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import TypeVar

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic import ValidationError as PydanticValidationError

from boustro.core.errors import ConfigError, ParseError

KNOT = 0.514444  # m/s
HOUR = 3600.0  # s

ModelT = TypeVar("ModelT", bound=BaseModel)


class _Config(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class LimitsConfig(_Config):
    """AUV and sensor limits in operator units."""

    v_min_knots: float = Field(2.0, gt=0)
    v_max_knots: float = Field(5.0, gt=0)
    t_max_hours: float = Field(10.0, gt=0)
    z_max: int = Field(1, ge=1)
    tau_s: float = Field(200.0, gt=0)

    @model_validator(mode="after")
    def _speed_order(self) -> LimitsConfig:
        if self.v_min_knots > self.v_max_knots:
            raise ValueError("v_min_knots must not exceed v_max_knots")
        return self


class PriorTier(_Config):
    count: int = Field(ge=0)
    prior: float = Field(gt=0, le=1)


def _default_tiers() -> list[PriorTier]:
    return [PriorTier(count=42, prior=0.05), PriorTier(count=5, prior=0.15), PriorTier(count=3, prior=0.80)]


class GeneratorConfig(_Config):
    """Random leak-map generator: sources are convex hulls of random ellipses."""

    width_m: float = Field(10_000.0, gt=0)
    height_m: float = Field(10_000.0, gt=0)
    tiers: list[PriorTier] = Field(default_factory=_default_tiers)
    semi_axis_min_m: float = Field(300.0, gt=0)
    semi_axis_max_m: float = Field(1200.0, gt=0)
    ellipse_samples: int = Field(32, ge=3)
    max_retries: int = Field(1000, ge=1)
    trackline_inset_m: float = Field(0.0, ge=0)
    dedup_tolerance_m: float = Field(1.0, ge=0)
    limits: LimitsConfig = Field(default_factory=LimitsConfig)
    seed: int = 0

    @model_validator(mode="after")
    def _axis_order(self) -> GeneratorConfig:
        if self.semi_axis_min_m > self.semi_axis_max_m:
            raise ValueError("semi_axis_min_m must not exceed semi_axis_max_m")
        return self

    @property
    def source_count(self) -> int:
        return sum(t.count for t in self.tiers)


class SolverConfig(_Config):
    """Log-barrier Newton solver for the per-trackline speed problem."""

    barrier_init: float = Field(1.0, gt=0)
    barrier_decrease: float = Field(0.2, gt=0, lt=1)
    newton_tol: float = Field(1e-10, gt=0)
    gap_tol: float = Field(1e-9, gt=0)
    max_newton_steps: int = Field(200, ge=1)
    armijo: float = Field(0.25, gt=0, lt=0.5)
    backtrack: float = Field(0.5, gt=0, lt=1)
    boundary_rtol: float = Field(1e-9, ge=0)


class MoceConfig(_Config):
    """Multi-objective cross-entropy hyperparameters."""

    population: int = Field(500, ge=10)
    elite_fraction: float = Field(0.1, gt=0, lt=1)
    smoothing: float = Field(0.7, gt=0, le=1)
    max_generations: int = Field(200, ge=1)
    stagnation_patience: int = Field(20, ge=1)
    rng_seed: int = Field(0, ge=0)
    p_init: float = Field(0.1, ge=0, le=1)
    p_floor: float = Field(0.01, ge=0, lt=0.5)
    t_std_floor: float = Field(60.0, ge=0)
    archive_capacity: int = Field(64, ge=2)
    max_resample: int = Field(100, ge=0)
    t_grid_points: int | None = Field(None, ge=1)
    seed_speeds: int = Field(5, ge=0)  # constant-speed greedy chains seeding the archive; 0 disables


class BaselineConfig(_Config):
    """Regularly spaced constant-speed comparison sweep."""

    trackline_counts: list[int] = Field(default_factory=lambda: list(range(1, 21)))
    speed_grid: list[float] | None = None  # m/s; None spreads `speed_steps` over [v_min, v_max]
    speed_steps: int = Field(5, ge=1)
    auv_count: int = Field(1, ge=1)
    offset: float = Field(0.5, ge=0, lt=1)

    @model_validator(mode="after")
    def _positive_counts(self) -> BaselineConfig:
        if not self.trackline_counts or any(k < 1 for k in self.trackline_counts):
            raise ValueError("trackline_counts must be a non-empty list of integers >= 1")
        if self.speed_grid is not None and (not self.speed_grid or any(v <= 0 for v in self.speed_grid)):
            raise ValueError("speed_grid must hold positive speeds")
        return self


class PlanningConfig(_Config):
    """Umbrella config for `plan` and `compare`."""

    moce: MoceConfig = Field(default_factory=MoceConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    baseline: BaselineConfig = Field(default_factory=BaselineConfig)


def _field_path(loc: tuple[int | str, ...]) -> str:
    return ".".join(str(part) for part in loc) or "<root>"


def parse_config(data: object, model: type[ModelT]) -> ModelT:
    """Validates already-decoded data against a config model."""
    try:
        return model.model_validate(data)
    except PydanticValidationError as e:
        first = e.errors()[0]
        raise ConfigError(_field_path(tuple(first["loc"])), first["msg"]) from e


def load_config(path: str | Path | None, model: type[ModelT], overrides: dict[str, object] | None = None) -> ModelT:
    """
    Loads a JSON config file into `model`.

    Args:
        path: The config file, or None for defaults.
        model: The pydantic model class.
        overrides: Top-level fields replacing file values (e.g. a --seed flag).

    Raises:
        ParseError: If the file is not valid JSON.
        ConfigError: If a field is invalid; the message names the field.
    """
    data: dict[str, object] = {}
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
        try:
            loaded = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, path=str(path), location=f"line {e.lineno} column {e.colno}") from e
        if not isinstance(loaded, dict):
            raise ParseError("Top-level value must be an object", path=str(path))
        data = loaded
    if overrides:
        data = {**data, **{k: v for k, v in overrides.items() if v is not None}}
    return parse_config(data, model)

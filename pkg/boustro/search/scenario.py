"""
The a-priori leak map: data model, random generation and the scenario file format.

A scenario holds the search area, the leak sources (spill polygon and prior leak
probability each), the candidate tracklines and the AUV limits. Internal units
are SI: meters, seconds, m/s.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from pydantic import ValidationError as PydanticValidationError

from boustro.core.config import HOUR, KNOT, GeneratorConfig, LimitsConfig
from boustro.core.errors import GenerationFailure, ParseError, ValidationError
from boustro.core.logger import get_logger
from boustro.search.geometry import (
    DEFAULT_DEDUP_TOLERANCE,
    Bounds,
    ConvexPolygon,
    Point2,
    Trackline,
    ellipse_polygon,
    generate_tracklines,
)

logger = get_logger(__name__)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class LeakSource:
    id: int
    origin: Point2
    spill: ConvexPolygon
    prior: float

    def __post_init__(self) -> None:
        if not (0.0 < self.prior <= 1.0) or math.isnan(self.prior):
            raise ValidationError("prior", f"Source {self.id} prior {self.prior} must lie in (0, 1]")
        if self.spill.area <= 0.0:
            raise ValidationError("spill_area", f"Source {self.id} spill has no area")
        if not self.spill.contains(self.origin):
            raise ValidationError("spill_contains_origin", f"Source {self.id} origin lies outside its spill")


@dataclass(frozen=True)
class AuvLimits:
    """Speed bounds (m/s), endurance T_max (s), max traversals per trackline z, sensor time tau (s)."""

    v_min: float
    v_max: float
    t_max: float
    z_max: int
    tau: float

    def __post_init__(self) -> None:
        if not (0.0 < self.v_min <= self.v_max):
            raise ValidationError("speed_limits", f"Need 0 < v_min <= v_max, got [{self.v_min}, {self.v_max}]")
        if not self.t_max > 0.0:
            raise ValidationError("t_max", "T_max must be positive")
        if self.z_max < 1:
            raise ValidationError("z_max", "z_max must be at least 1")
        if not self.tau > 0.0:
            raise ValidationError("tau", "Sensor characteristic time must be positive")

    @property
    def mu_min(self) -> float:
        return 1.0 / self.v_max

    @property
    def mu_max(self) -> float:
        return 1.0 / self.v_min


def limits_from_config(cfg: LimitsConfig) -> AuvLimits:
    """Converts operator units (knots, hours) to SI."""
    return AuvLimits(
        v_min=cfg.v_min_knots * KNOT,
        v_max=cfg.v_max_knots * KNOT,
        t_max=cfg.t_max_hours * HOUR,
        z_max=cfg.z_max,
        tau=cfg.tau_s,
    )


@dataclass(frozen=True)
class Scenario:
    area: Bounds
    sources: tuple[LeakSource, ...]
    tracklines: tuple[Trackline, ...]
    limits: AuvLimits
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if not self.tracklines:
            raise ValidationError("tracklines", "Scenario needs at least one trackline")
        ys = [t.y for t in self.tracklines]
        if any(b < a for a, b in zip(ys, ys[1:], strict=False)):
            raise ValidationError("tracklines_sorted", "Tracklines must be sorted by y")
        ids = [s.id for s in self.sources]
        if len(set(ids)) != len(ids):
            raise ValidationError("source_ids", "Source ids must be unique")
        for s in self.sources:
            if not self.area.contains_polygon(s.spill):
                raise ValidationError("spill_in_area", f"Source {s.id} spill extends outside the area")

    @cached_property
    def priors(self) -> np.ndarray:
        arr = np.array([s.prior for s in self.sources], dtype=float)
        arr.setflags(write=False)
        return arr

    @cached_property
    def trackline_lengths(self) -> np.ndarray:
        arr = np.array([t.length for t in self.tracklines], dtype=float)
        arr.setflags(write=False)
        return arr

    @property
    def prior_mass(self) -> float:
        return float(self.priors.sum())

    def with_tracklines(self, tracklines: list[Trackline] | tuple[Trackline, ...]) -> Scenario:
        return dataclasses.replace(self, tracklines=tuple(sorted(tracklines, key=lambda t: t.y)))

    def for_fleet(self, auvs: int) -> Scenario:
        """The same survey with T_max pooled over `auvs` vehicles."""
        if auvs < 1:
            raise ValidationError("auv_count", "At least one AUV is required")
        if auvs == 1:
            return self
        return dataclasses.replace(self, limits=dataclasses.replace(self.limits, t_max=self.limits.t_max * auvs))


# --- File schema -------------------------------------------------------------


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid")


class AreaDocument(_Document):
    x_min: float
    y_min: float
    x_max: float
    y_max: float


class LimitsDocument(_Document):
    v_min: float
    v_max: float
    t_max: float
    z_max: int
    tau: float


class SourceDocument(_Document):
    id: int
    origin: tuple[float, float]
    prior: float
    spill: list[tuple[float, float]]


class TracklineDocument(_Document):
    y: float
    x_start: float
    x_end: float


class ScenarioDocument(_Document):
    version: int = SCHEMA_VERSION
    rng_seed: int = 0
    area: AreaDocument
    limits: LimitsDocument
    sources: list[SourceDocument] = Field(default_factory=list)
    tracklines: list[TracklineDocument] | None = None

    @classmethod
    def from_scenario(cls, s: Scenario) -> ScenarioDocument:
        return cls(
            version=SCHEMA_VERSION,
            rng_seed=s.rng_seed,
            area=AreaDocument(**dataclasses.asdict(s.area)),
            limits=LimitsDocument(**dataclasses.asdict(s.limits)),
            sources=[
                SourceDocument(
                    id=src.id,
                    origin=(src.origin.x, src.origin.y),
                    prior=src.prior,
                    spill=[(v.x, v.y) for v in src.spill.vertices],
                )
                for src in s.sources
            ],
            tracklines=[TracklineDocument(y=t.y, x_start=t.x_start, x_end=t.x_end) for t in s.tracklines],
        )

    def to_scenario(self) -> Scenario:
        if self.version != SCHEMA_VERSION:
            raise ParseError(f"Unsupported scenario version {self.version} (expected {SCHEMA_VERSION})")
        area = Bounds(**self.area.model_dump())
        sources = tuple(
            LeakSource(
                id=src.id,
                origin=Point2(*src.origin),
                spill=ConvexPolygon.from_vertices(src.spill),
                prior=src.prior,
            )
            for src in self.sources
        )
        if self.tracklines is None:
            if not sources:
                raise ValidationError("tracklines", "Scenario without sources must list its tracklines")
            tracklines = tuple(generate_tracklines([s.spill for s in sources], area, tolerance=DEFAULT_DEDUP_TOLERANCE))
        else:
            tracklines = tuple(Trackline(y=t.y, x_start=t.x_start, x_end=t.x_end) for t in self.tracklines)
        return Scenario(
            area=area,
            sources=sources,
            tracklines=tracklines,
            limits=AuvLimits(**self.limits.model_dump()),
            rng_seed=self.rng_seed,
        )


def scenario_to_json(s: Scenario) -> str:
    return json.dumps(ScenarioDocument.from_scenario(s).model_dump(mode="json"), indent=2) + "\n"


def scenario_from_json(text: str, source: str | None = None) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, path=source, location=f"line {e.lineno} column {e.colno}") from e
    try:
        doc = ScenarioDocument.model_validate(data)
    except PydanticValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(p) for p in first["loc"]) or "<root>"
        raise ParseError(first["msg"], path=source, location=f"field {field}") from e
    return doc.to_scenario()


def save_scenario(s: Scenario, path: str | Path) -> None:
    Path(path).write_text(scenario_to_json(s), encoding="utf-8")


def load_scenario(path: str | Path) -> Scenario:
    """
    Reads a scenario file.

    Raises:
        ParseError: If the file is not valid JSON or does not match the schema.
        ValidationError: If a domain invariant is violated (the invariant is named).
    """
    return scenario_from_json(Path(path).read_text(encoding="utf-8"), source=str(path))


def scenario_digest(s: Scenario) -> str:
    canonical = json.dumps(ScenarioDocument.from_scenario(s).model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


# --- Random generation -------------------------------------------------------


def _random_source(
    source_id: int, prior: float, area: Bounds, config: GeneratorConfig, rng: np.random.Generator
) -> LeakSource:
    for attempt in range(config.max_retries):
        center = Point2(float(rng.uniform(area.x_min, area.x_max)), float(rng.uniform(area.y_min, area.y_max)))
        semi_a = float(rng.uniform(config.semi_axis_min_m, config.semi_axis_max_m))
        semi_b = float(rng.uniform(config.semi_axis_min_m, config.semi_axis_max_m))
        rotation = float(rng.uniform(0.0, math.pi))
        spill = ellipse_polygon(center, semi_a, semi_b, rotation, config.ellipse_samples)
        if area.contains_polygon(spill):
            if attempt:
                logger.debug("Spill resampled", {"source": source_id, "attempts": attempt + 1})
            return LeakSource(id=source_id, origin=center, spill=spill, prior=prior)
    raise GenerationFailure(
        f"Could not place source {source_id} inside the area after {config.max_retries} attempts"
    )


def generate_random_scenario(config: GeneratorConfig, seed: int | None = None) -> Scenario:
    """
    Generates a leak map whose spills are convex hulls of random ellipses.

    Centers are uniform in the area, semi-axes uniform in the configured range and
    rotation uniform in [0, pi). Ellipses crossing the boundary are resampled.
    Priors are assigned tier by tier in id order. Deterministic given the seed.

    Raises:
        GenerationFailure: If no source is requested or a source cannot be placed.
    """
    seed = config.seed if seed is None else seed
    if config.source_count == 0:
        raise GenerationFailure("At least one leak source is required (tracklines would be empty)")

    rng = np.random.default_rng(seed)
    area = Bounds.square(config.width_m, config.height_m)
    sources: list[LeakSource] = []
    for tier in config.tiers:
        for _ in range(tier.count):
            sources.append(_random_source(len(sources), tier.prior, area, config, rng))

    tracklines = generate_tracklines(
        [s.spill for s in sources],
        area,
        inset=config.trackline_inset_m,
        tolerance=config.dedup_tolerance_m,
    )
    logger.info(
        "Scenario generated",
        {"seed": seed, "sources": len(sources), "tracklines": len(tracklines)},
    )
    return Scenario(
        area=area,
        sources=tuple(sources),
        tracklines=tuple(tracklines),
        limits=limits_from_config(config.limits),
        rng_seed=seed,
    )

from __future__ import annotations

from pathlib import Path
from typing import Any

from boustro.core.config import PlanningConfig, load_config, parse_config
from boustro.core.errors import InputError
from boustro.search.scenario import Scenario, load_scenario


def require(params: dict[str, Any], key: str, action: str) -> Any:
    value = params.get(key)
    if value is None:
        raise InputError(f"'{key}' parameter is required for {action} action")
    return value


def output_dir(params: dict[str, Any]) -> Path:
    out = Path(params.get("out") or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def scenario_param(params: dict[str, Any], action: str) -> Scenario:
    return load_scenario(require(params, "scenario", action))


def planning_config(params: dict[str, Any]) -> PlanningConfig:
    """PlanningConfig from the optional `config` file; `seed` replaces moce.rng_seed."""
    config = load_config(params.get("config"), PlanningConfig)
    seed = params.get("seed")
    if seed is None:
        return config
    data = config.model_dump()
    data["moce"]["rng_seed"] = seed
    return parse_config(data, PlanningConfig)


def fleet_size(params: dict[str, Any], config: PlanningConfig) -> int:
    """`auvs` parameter, falling back to baseline.auv_count."""
    return int(params.get("auvs") or config.baseline.auv_count)

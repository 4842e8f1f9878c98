import asyncio
import json
from typing import Any

from boustro.actions.common import output_dir
from boustro.core.config import GeneratorConfig, load_config
from boustro.core.context import PlannerContext
from boustro.export.plots import plot_detection_law, plot_scenario
from boustro.search.scenario import generate_random_scenario, save_scenario, scenario_digest


async def generate_handler(params: dict[str, Any], context: PlannerContext) -> str:
    """Generate a random leak map and write scenario.json with its figures."""
    config = load_config(params.get("config"), GeneratorConfig, {"seed": params.get("seed")})
    out = output_dir(params)

    scenario = await asyncio.to_thread(generate_random_scenario, config)
    path = out / "scenario.json"
    save_scenario(scenario, path)

    figures = []
    if params.get("plots", True):
        figures.append(str(plot_scenario(scenario, out / "scenario.svg")))
        figures.append(str(plot_detection_law(scenario.limits.tau, out / "detection_law.svg")))

    result = {
        "scenario": str(path),
        "digest": scenario_digest(scenario),
        "seed": scenario.rng_seed,
        "sources": len(scenario.sources),
        "tracklines": len(scenario.tracklines),
        "figures": figures,
    }
    return json.dumps(result)

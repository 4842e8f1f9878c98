import json
from collections import Counter
from typing import Any

import numpy as np

from boustro.actions.common import scenario_param
from boustro.core.config import HOUR, KNOT
from boustro.core.context import PlannerContext
from boustro.search.objective import build_effort_matrix
from boustro.search.scenario import scenario_digest


async def describe_handler(params: dict[str, Any], context: PlannerContext) -> str:
    """Summarize a scenario: sources per prior, trackline coverage and limits in operator units."""
    scenario = scenario_param(params, "describe")
    effort = build_effort_matrix(scenario)
    covered = np.any(effort.chord_lengths > 0.0, axis=1)
    limits = scenario.limits

    result = {
        "digest": scenario_digest(scenario),
        "sources": len(scenario.sources),
        "prior_mass": scenario.prior_mass,
        "priors": {repr(p): n for p, n in sorted(Counter(s.prior for s in scenario.sources).items())},
        "tracklines": len(scenario.tracklines),
        "sources_crossed": int(covered.sum()),
        "uncrossed_source_ids": [s.id for s, c in zip(scenario.sources, covered, strict=True) if not c],
        "limits": {
            "v_min_knots": limits.v_min / KNOT,
            "v_max_knots": limits.v_max / KNOT,
            "t_max_hours": limits.t_max / HOUR,
            "z_max": limits.z_max,
            "tau_s": limits.tau,
        },
    }
    return json.dumps(result)

from fastmcp import Context

from boustro.app import mcp


@mcp.prompt()
async def plan_leak_survey(scenario: str, ctx: Context, hours: float = 10.0) -> list:
    """Guide the LLM through planning and checking a leak survey.

    Steps:
    1. Describe the scenario
    2. Compute the Pareto front
    3. Pick a plan within the endurance
    4. Evaluate it with a Monte-Carlo cross-check
    """
    return [
        {
            "role": "user",
            "content": f"""Plan an AUV leak search over the scenario `{scenario}` with at most {hours:g} hours on tracklines.

Steps:

1. Use `survey_scenario` with `action="describe"` to check that every high-prior source is crossed by a trackline.
2. Use `survey_plan` with `action="plan"` to compute the Pareto front.
3. From `front.csv`, pick the plan with the lowest `p_nd` whose `duration_s` is at most {hours * 3600:g}.
4. Use `survey_plan` with `action="evaluate"`, that plan file and `monte_carlo=100000`; confirm |z_score| <= 3.
5. Report the chosen plan, its non-detection probability and the posterior leak probabilities of the top sources.
""",
        }
    ]

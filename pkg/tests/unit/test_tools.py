import json
from unittest.mock import AsyncMock

import pytest

from boustro.core.context import PlannerContext
from boustro.core.executor import SerialExecutor
from boustro.export.report import save_plan
from boustro.search.objective import PathPlan
from boustro.tools.survey_plan import survey_plan
from boustro.tools.survey_scenario import survey_scenario

mock_context = PlannerContext(executor=SerialExecutor())


@pytest.mark.asyncio
async def test_survey_scenario_dispatches_to_handler(mocker):
    handler = AsyncMock(return_value='{"sources": 2}')
    mocker.patch.dict("boustro.actions.scenario.SCENARIO_ACTIONS", {"describe": handler})

    result = await survey_scenario(action="describe", scenario="scenario.json", context=mock_context)

    assert json.loads(result) == {"sources": 2}
    params, ctx = handler.await_args.args
    assert params["scenario"] == "scenario.json"
    assert params["plots"] is True
    assert ctx is mock_context


@pytest.mark.asyncio
async def test_survey_scenario_describe(scenario_file):
    result = json.loads(await survey_scenario(action="describe", scenario=str(scenario_file), context=mock_context))
    assert result["sources"] == 2


@pytest.mark.asyncio
async def test_survey_scenario_unknown_action():
    with pytest.raises(ValueError, match="Unknown action: foo"):
        await survey_scenario(action="foo", context=mock_context)  # type: ignore[arg-type]


@pytest.mark.asyncio
async def test_survey_plan_passes_all_parameters(mocker):
    handler = AsyncMock(return_value="{}")
    mocker.patch.dict("boustro.actions.plan.PLAN_ACTIONS", {"compare": handler})

    await survey_plan(
        action="compare", scenario="s.json", report="r.json", auvs=3, seed=7, plots=False, context=mock_context
    )

    params, _ = handler.await_args.args
    assert params["report"] == "r.json"
    assert params["auvs"] == 3
    assert params["seed"] == 7
    assert params["plots"] is False
    assert params["format"] == "csv"


@pytest.mark.asyncio
async def test_survey_plan_evaluate(scenario_file, tmp_path):
    plan_path = tmp_path / "plan.json"
    save_plan(PathPlan(counts=(1, 0, 0, 0), speeds=(2.0, 2.0, 2.0, 2.0)), plan_path)
    result = json.loads(
        await survey_plan(action="evaluate", scenario=str(scenario_file), plan=str(plan_path), context=mock_context)
    )
    assert result["duration_s"] == pytest.approx(500.0)
    assert "monte_carlo" not in result


@pytest.mark.asyncio
async def test_survey_plan_unknown_action():
    with pytest.raises(ValueError, match="Unknown action: foo"):
        await survey_plan(action="foo", scenario="s.json", context=mock_context)  # type: ignore[arg-type]

import csv
import json

import pytest

from boustro.core.config import PlanningConfig
from boustro.core.errors import ParseError
from boustro.export.report import (
    COMPARISON_COLUMNS,
    FRONT_COLUMNS,
    build_report,
    comparison_rows,
    load_plan,
    load_report,
    plan_id,
    save_plan,
    save_report,
    verify_report,
    write_comparison_csv,
    write_front_csv,
    write_front_json,
    write_plans,
)
from boustro.search.moce import MoceResult
from boustro.search.objective import PathPlan, build_effort_matrix, evaluate
from boustro.search.pareto import ObjectivePair, ParetoArchive


@pytest.fixture
def result(two_source_scenario) -> MoceResult:
    scenario = two_source_scenario
    effort = build_effort_matrix(scenario)
    archive = ParetoArchive()
    for plan in (
        PathPlan.empty(4, 2.0),
        PathPlan(counts=(1, 0, 0, 0), speeds=(2.0, 2.0, 2.0, 2.0)),
        PathPlan(counts=(1, 1, 1, 0), speeds=(1.0, 1.0, 1.5, 2.0)),
    ):
        ev = evaluate(plan, effort, scenario.priors, scenario.limits.tau)
        archive.insert(ObjectivePair(ev.p_nd, ev.duration), plan, ev.duration)
    return MoceResult(archive=archive, generations=3, evaluations=60, discarded=1, elapsed_s=0.5)


@pytest.fixture
def report(two_source_scenario, result):
    return build_report(two_source_scenario, result, PlanningConfig())


def test_plan_ids_are_zero_padded():
    assert plan_id(0) == "plan-000"
    assert plan_id(42) == "plan-042"


def test_build_report(report, two_source_scenario):
    assert [e.plan_id for e in report.entries] == ["plan-000", "plan-001", "plan-002"]
    durations = [e.duration_s for e in report.entries]
    assert durations == sorted(durations)
    zero = report.entries[0]
    assert zero.p_nd == pytest.approx(0.8)
    assert zero.posteriors == pytest.approx([0.6, 0.2])
    last = report.entries[-1]
    assert last.posteriors[0] < 0.6 and last.posteriors[1] < 0.2
    # three selected lines, two vertical legs of 100 m and 400 m at v_max
    assert last.wall_clock_s == pytest.approx(last.duration_s + 500.0 / 2.0)
    assert report.timing.evaluations == 60
    assert report.config["moce"]["population"] == 500
    assert report.scenario.to_scenario() == two_source_scenario


def test_report_round_trip_verifies(report, tmp_path):
    path = tmp_path / "report.json"
    save_report(report, path)
    loaded = load_report(path)
    assert loaded == report
    assert verify_report(loaded) == []
    assert loaded.plan("plan-001").counts == (1, 0, 0, 0)
    with pytest.raises(KeyError):
        loaded.plan("plan-999")


def test_verify_report_flags_tampered_entries(report):
    tampered = report.model_copy(deep=True)
    tampered.entries[1].p_nd += 0.01
    assert verify_report(tampered) == ["plan-001"]


def test_plan_file_round_trip(tmp_path):
    plan = PathPlan(counts=(0, 2, 1), speeds=(1.0, 1.25, 2.0))
    path = tmp_path / "plan.json"
    save_plan(plan, path)
    assert json.loads(path.read_text())["version"] == 1
    assert load_plan(path) == plan


@pytest.mark.parametrize(
    "content, fragment",
    [
        ("{not json", "line 1"),
        ('{"version": 1, "counts": [1]}', "field speeds"),
        ('{"version": 2, "counts": [1], "speeds": [1.0]}', "version 2"),
        ('{"version": 1, "counts": [1, 0], "speeds": [1.0]}', "same length"),
    ],
)
def test_load_plan_errors(tmp_path, content, fragment):
    path = tmp_path / "plan.json"
    path.write_text(content)
    with pytest.raises(ParseError) as exc:
        load_plan(path)
    assert fragment in str(exc.value)
    assert exc.value.path == str(path)


def test_write_plans(report, tmp_path):
    written = write_plans(report, tmp_path / "plans")
    assert [p.name for p in written] == ["plan-000.json", "plan-001.json", "plan-002.json"]
    assert load_plan(written[2]) == report.plan("plan-002")


def test_front_exports(report, tmp_path):
    csv_path = tmp_path / "front.csv"
    write_front_csv(report.entries, csv_path)
    with open(csv_path, newline="") as f:
        rows = list(csv.DictReader(f))
    assert list(rows[0]) == FRONT_COLUMNS
    assert [float(r["p_nd"]) for r in rows] == [e.p_nd for e in report.entries]
    assert rows[0]["plan_id"] == "plan-000"

    json_path = tmp_path / "front.json"
    write_front_json(report.entries, json_path)
    data = json.loads(json_path.read_text())
    assert data[1] == {"p_nd": report.entries[1].p_nd, "duration_s": report.entries[1].duration_s, "plan_id": "plan-001"}


def test_comparison_rows_and_csv(tmp_path):
    rows = comparison_rows([(100.0, 1, 2.0, 0.7), (50.0, 2, 2.0, 0.6)], [0.5, float("nan")])
    assert rows[0]["gap"] == pytest.approx(0.2)
    assert rows[1]["gap"] != rows[1]["gap"]
    path = tmp_path / "comparison.csv"
    write_comparison_csv(rows, path)
    with open(path, newline="") as f:
        read = list(csv.DictReader(f))
    assert list(read[0]) == COMPARISON_COLUMNS
    assert read[0]["k"] == "1"
    assert read[1]["gap"] == "nan"

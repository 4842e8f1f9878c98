from boustro.export.plots import plot_comparison, plot_detection_law, plot_front, plot_scenario, plot_trajectory
from boustro.search.baseline import CurvePoint
from boustro.search.objective import PathPlan
from boustro.search.pareto import ObjectivePair


def test_figures_are_svg(two_source_scenario, tmp_path):
    plan = PathPlan(counts=(1, 1, 0, 1), speeds=(1.0, 1.5, 2.0, 2.0))
    paths = [
        plot_scenario(two_source_scenario, tmp_path / "scenario.svg"),
        plot_detection_law(200.0, tmp_path / "law.svg"),
        plot_front([ObjectivePair(0.8, 0.0), ObjectivePair(0.3, 2000.0)], tmp_path / "front.svg"),
        plot_trajectory(two_source_scenario, plan, [0.3, 0.2], tmp_path / "trajectory.svg"),
        plot_comparison(
            [CurvePoint(0.8, 0.0, 0.0), CurvePoint(0.3, 2000.0, 1000.0)],
            [CurvePoint(0.5, 3000.0, 1500.0)],
            2,
            tmp_path / "comparison.svg",
        ),
    ]
    for path in paths:
        text = path.read_text()
        assert text.lstrip().startswith("<?xml")
        assert "<svg" in text


def test_figures_are_reproducible(two_source_scenario, tmp_path):
    first = plot_scenario(two_source_scenario, tmp_path / "a.svg").read_bytes()
    second = plot_scenario(two_source_scenario, tmp_path / "b.svg").read_bytes()
    assert first == second

"""
SVG figures: leak map, sensor law, Pareto front, trajectories and the baseline comparison.

Axes use operator units (km, hours, knots); the data files stay SI.
"""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import LinearSegmentedColormap, Normalize  # noqa: E402
from matplotlib.patches import Polygon  # noqa: E402

from boustro.core.config import HOUR, KNOT  # noqa: E402
from boustro.search.baseline import CurvePoint  # noqa: E402
from boustro.search.objective import PathPlan, detection_probability  # noqa: E402
from boustro.search.pareto import ObjectivePair  # noqa: E402
from boustro.search.scenario import Scenario  # noqa: E402

# fixed ids and no timestamp, so identical inputs give identical files
matplotlib.rcParams["svg.hashsalt"] = "boustro"

KM = 1000.0
SPEED_CMAP = LinearSegmentedColormap.from_list("speed", ["tab:green", "gold", "tab:red"])


def _save(fig: plt.Figure, path: str | Path) -> Path:
    path = Path(path)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def _area_axes(ax: plt.Axes, scenario: Scenario) -> None:
    area = scenario.area
    ax.set_xlim(area.x_min / KM, area.x_max / KM)
    ax.set_ylim(area.y_min / KM, area.y_max / KM)
    ax.set_aspect("equal")
    ax.set_xlabel("x (km)")
    ax.set_ylabel("y (km)")


def _spill_patch(vertices: np.ndarray, **kwargs: object) -> Polygon:
    return Polygon(vertices / KM, closed=True, **kwargs)


def plot_scenario(scenario: Scenario, path: str | Path) -> Path:
    """A-priori leak map: spills colored by prior, candidate tracklines in gray."""
    fig, ax = plt.subplots(figsize=(7, 6))
    norm = Normalize(vmin=0.0, vmax=max((s.prior for s in scenario.sources), default=1.0))
    cmap = plt.get_cmap("viridis")
    for t in scenario.tracklines:
        ax.plot([t.x_start / KM, t.x_end / KM], [t.y / KM, t.y / KM], color="0.8", linewidth=0.4, zorder=1)
    for s in scenario.sources:
        ax.add_patch(_spill_patch(s.spill.as_array(), facecolor=cmap(norm(s.prior)), edgecolor="k", alpha=0.7, zorder=2))
        ax.plot(s.origin.x / KM, s.origin.y / KM, "k.", markersize=3, zorder=3)
    fig.colorbar(plt.cm.ScalarMappable(norm=norm, cmap=cmap), ax=ax, label="prior leak probability")
    _area_axes(ax, scenario)
    ax.set_title(f"Leak map: {len(scenario.sources)} sources, {len(scenario.tracklines)} tracklines")
    return _save(fig, path)


def plot_detection_law(tau: float, path: str | Path) -> Path:
    dwell = np.linspace(0.0, 5.0 * tau, 200)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(dwell, detection_probability(dwell, tau), color="tab:blue")
    ax.axvline(tau, color="0.5", linestyle=":", label=f"tau = {tau:g} s")
    ax.set_xlabel("dwell time in spill (s)")
    ax.set_ylabel("detection probability")
    ax.set_ylim(0.0, 1.0)
    ax.legend()
    ax.grid(True)
    return _save(fig, path)


def plot_front(points: Sequence[ObjectivePair], path: str | Path) -> Path:
    """Pareto front: non-detection probability against duration in hours."""
    fig, ax = plt.subplots(figsize=(6, 4))
    hours = [p.duration / HOUR for p in points]
    ax.plot(hours, [p.p_nd for p in points], "o", color="tab:blue", markersize=4)
    ax.set_xlabel("path duration (h)")
    ax.set_ylabel("non-detection probability")
    ax.set_title(f"Pareto set ({len(points)} solutions)")
    ax.grid(True)
    return _save(fig, path)


def plot_trajectory(
    scenario: Scenario, plan: PathPlan, posteriors: Sequence[float], path: str | Path
) -> Path:
    """
    Boustrophedon path over the leak map. Selected tracklines are colored from green
    (v_min) to red (v_max); unselected ones are dashed blue. Each spill is labeled with
    its posterior leak probability.
    """
    limits = scenario.limits
    norm = Normalize(vmin=limits.v_min / KNOT, vmax=limits.v_max / KNOT)
    fig, ax = plt.subplots(figsize=(7, 6))
    for s, post in zip(scenario.sources, posteriors, strict=True):
        ax.add_patch(_spill_patch(s.spill.as_array(), facecolor="0.85", edgecolor="0.4", zorder=1))
        ax.annotate(f"{post:.2f}", (s.origin.x / KM, s.origin.y / KM), fontsize=6, ha="center", zorder=4)

    selected = []
    for t, count, speed in zip(scenario.tracklines, plan.counts, plan.speeds, strict=True):
        xs, y = [t.x_start / KM, t.x_end / KM], [t.y / KM, t.y / KM]
        if count == 0:
            ax.plot(xs, y, color="tab:blue", linestyle="--", linewidth=0.4, zorder=2)
            continue
        selected.append(t)
        ax.plot(xs, y, color=SPEED_CMAP(norm(speed / KNOT)), linewidth=1.6, zorder=3)
        if count > 1:
            ax.annotate(f"x{count}", (xs[1], y[0]), fontsize=6, va="bottom", ha="right")

    # connectors alternate sides: the sweep goes out on one line and back on the next
    for i, (a, b) in enumerate(zip(selected, selected[1:], strict=False)):
        x = (a.x_end if i % 2 == 0 else a.x_start) / KM
        ax.plot([x, x], [a.y / KM, b.y / KM], color="k", linewidth=0.6, zorder=3)

    fig.colorbar(plt.cm.ScalarMappable(norm=norm, cmap=SPEED_CMAP), ax=ax, label="speed (knots)")
    _area_axes(ax, scenario)
    return _save(fig, path)


def plot_comparison(
    optimized: Sequence[CurvePoint], baseline: Sequence[CurvePoint], auvs: int, path: str | Path
) -> Path:
    """Detection probability against elapsed hours for the optimized front and the regular baseline."""
    fig, ax = plt.subplots(figsize=(6, 4))
    suffix = "" if auvs == 1 else f" ({auvs} AUVs)"
    opt = sorted(optimized, key=lambda c: c.elapsed)
    base = sorted(baseline, key=lambda c: c.elapsed)
    ax.plot([c.elapsed / HOUR for c in opt], [1.0 - c.p_nd for c in opt], "o-", markersize=3, label=f"optimized{suffix}")
    ax.plot([c.elapsed / HOUR for c in base], [1.0 - c.p_nd for c in base], "s--", markersize=3, label=f"regular{suffix}")
    ax.set_xlabel("elapsed time (h)")
    ax.set_ylabel("detection probability")
    ax.legend()
    ax.grid(True)
    return _save(fig, path)

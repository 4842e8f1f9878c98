"""Tool parameter defaults resolved by the server at call time."""

from __future__ import annotations

from collections.abc import Mapping
from typing import Any, cast

from fastmcp.dependencies import Depends
from fastmcp.server.dependencies import get_context

from boustro.core.context import PlannerContext

LIFESPAN_KEY = "planner_context"


def planner_context_from(lifespan: Mapping[str, Any] | None) -> PlannerContext:
    """The PlannerContext stored by `boustro.app.lifespan`."""
    found = (lifespan or {}).get(LIFESPAN_KEY)
    if not isinstance(found, PlannerContext):
        raise RuntimeError(f"Server lifespan did not provide '{LIFESPAN_KEY}'; tools need a running boustro server")
    return found


def _current_planner_context() -> PlannerContext:
    return planner_context_from(get_context().lifespan_context)


def CurrentPlannerContext() -> PlannerContext:
    """Default for a tool's `context` parameter: the server's shared PlannerContext."""
    return cast(PlannerContext, Depends(_current_planner_context))

from contextlib import asynccontextmanager

from fastmcp import FastMCP

from boustro import __version__
from boustro.core.context import create_context
from boustro.dependencies import LIFESPAN_KEY

# Tools import `mcp` from here, never from server.py: running `python -m boustro.server`
# loads server.py as __main__, and importing it again would create a second, empty instance.


@asynccontextmanager
async def lifespan(server: FastMCP):
    """Build the PlannerContext once and hand it to tools through the lifespan result."""
    planner_context = create_context()
    try:
        yield {LIFESPAN_KEY: planner_context}
    finally:
        planner_context.close()


mcp = FastMCP(
    name="boustro",
    version=__version__,
    instructions=(
        "Boustro leak-search planner - generate leak maps, compute Pareto-optimal boustrophedon AUV paths "
        "and compare them against regularly spaced constant-speed surveys. Outputs are files."
    ),
    lifespan=lifespan,
)


@mcp.custom_route("/health", methods=["GET"])
async def health(request):
    """Returns the health status of the server."""
    from starlette.responses import JSONResponse

    return JSONResponse({"status": "ok"})

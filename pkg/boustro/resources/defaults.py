import json

from boustro.app import mcp
from boustro.core.config import GeneratorConfig, PlanningConfig


@mcp.resource("boustro://defaults")
async def defaults_resource() -> str:
    """Default generator and planning configuration."""
    return json.dumps(
        {
            "generator": GeneratorConfig().model_dump(mode="json"),
            "planning": PlanningConfig().model_dump(mode="json"),
        }
    )

"""
The `boustro` command: generate, plan, evaluate and compare.

Each sub-command runs the same async handler the tool server exposes and prints its
JSON result on stdout. Exit codes: 0 success, 2 input error, 3 infeasible problem,
4 internal failure.
"""

from __future__ import annotations

import argparse
import asyncio
import sys
from collections.abc import Awaitable, Callable, Sequence
from typing import Any

from boustro import __version__
from boustro.actions.plan import PLAN_ACTIONS
from boustro.actions.scenario import SCENARIO_ACTIONS
from boustro.core.context import PlannerContext, create_context
from boustro.core.errors import EXIT_INPUT, EXIT_INTERNAL, EXIT_OK, BoustroError
from boustro.core.logger import get_logger

logger = get_logger(__name__)

Handler = Callable[[dict[str, Any], PlannerContext], Awaitable[str]]

COMMANDS: dict[str, Handler] = {
    "generate": SCENARIO_ACTIONS["generate"],
    "describe": SCENARIO_ACTIONS["describe"],
    **PLAN_ACTIONS,
}


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_non_negative, help="override the seed of the config file")
    common.add_argument("--threads", type=_positive, help="evaluation threads (default: all cores)")
    common.add_argument("--out", default=".", help="output directory (default: current directory)")
    common.add_argument("--format", choices=["csv", "json"], default="csv", help="front export format")
    common.add_argument("--no-plots", dest="plots", action="store_false", help="skip SVG figures")

    parser = argparse.ArgumentParser(prog="boustro", description="Pareto-optimal boustrophedon leak-search planner")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", parents=[common], help="generate a random leak map")
    gen.add_argument("--config", help="generator config (JSON)")

    desc = sub.add_parser("describe", parents=[common], help="summarize a scenario")
    desc.add_argument("scenario")

    plan = sub.add_parser("plan", parents=[common], help="compute the Pareto front of a scenario")
    plan.add_argument("scenario")
    plan.add_argument("--config", help="planning config (JSON)")
    plan.add_argument("--auvs", type=_positive, help="number of AUVs pooling their endurance")

    ev = sub.add_parser("evaluate", parents=[common], help="evaluate a plan file")
    ev.add_argument("scenario")
    ev.add_argument("plan")
    ev.add_argument("--monte-carlo", dest="monte_carlo", type=_positive, metavar="N", help="Monte-Carlo samples")
    ev.add_argument("--auvs", type=_positive, help="number of AUVs the plan was made for")

    cmp_ = sub.add_parser("compare", parents=[common], help="compare against regular constant-speed paths")
    cmp_.add_argument("scenario")
    cmp_.add_argument("--config", help="planning config (JSON)")
    cmp_.add_argument("--report", help="reuse the front of an existing report.json")
    cmp_.add_argument("--auvs", type=_positive, help="number of AUVs sharing the survey; a reused report must match")
    return parser


def run_command(command: str, params: dict[str, Any], threads: int | None = None) -> tuple[int, str]:
    """Runs one handler; returns (exit code, stdout text)."""
    context = create_context(threads)
    logger.info("Command started", {"command": command})
    try:
        output = asyncio.run(COMMANDS[command](params, context))
    except BoustroError as e:
        logger.error("Command failed", {"command": command, "exit_code": e.exit_code, "error": str(e)})
        return e.exit_code, f"error: {e}"
    except OSError as e:
        logger.error("Command failed", {"command": command, "exit_code": EXIT_INPUT, "error": str(e)})
        return EXIT_INPUT, f"error: {e}"
    except Exception as e:
        logger.exception("Command crashed", {"command": command, "exit_code": EXIT_INTERNAL})
        return EXIT_INTERNAL, f"internal error: {e}"
    finally:
        context.close()
    logger.info("Command finished", {"command": command})
    return EXIT_OK, output


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    params = {k: v for k, v in vars(args).items() if k not in ("command", "threads")}
    code, text = run_command(args.command, params, args.threads)
    print(text, file=sys.stdout if code == EXIT_OK else sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

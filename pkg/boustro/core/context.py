from __future__ import annotations

from dataclasses import dataclass

from boustro.core.executor import CandidateExecutor, create_executor


@dataclass
class PlannerContext:
    """Holds shared state for action handlers: the candidate executor."""

    executor: CandidateExecutor

    def close(self) -> None:
        self.executor.shutdown()


def create_context(threads: int | None = None) -> PlannerContext:
    return PlannerContext(executor=create_executor(threads))

from __future__ import annotations

import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import Protocol, TypeVar

from boustro.core.logger import get_logger

logger = get_logger(__name__)

ItemT = TypeVar("ItemT")
ResultT = TypeVar("ResultT")


class CandidateExecutor(Protocol):
    """Runs independent evaluations; results come back in input order."""

    @property
    def workers(self) -> int: ...

    def map(self, fn: Callable[[ItemT], ResultT], items: Iterable[ItemT]) -> list[ResultT]: ...

    def shutdown(self) -> None: ...


class SerialExecutor:
    @property
    def workers(self) -> int:
        return 1

    def map(self, fn: Callable[[ItemT], ResultT], items: Iterable[ItemT]) -> list[ResultT]:
        return [fn(item) for item in items]

    def shutdown(self) -> None:
        pass


class ThreadPoolCandidateExecutor:
    def __init__(self, workers: int):
        self._workers = workers
        self._pool: ThreadPoolExecutor | None = None

    @property
    def workers(self) -> int:
        return self._workers

    def _get_pool(self) -> ThreadPoolExecutor:
        if self._pool is None:
            self._pool = ThreadPoolExecutor(max_workers=self._workers, thread_name_prefix="boustro")
        return self._pool

    def map(self, fn: Callable[[ItemT], ResultT], items: Iterable[ItemT]) -> list[ResultT]:
        return list(self._get_pool().map(fn, items))

    def shutdown(self) -> None:
        if self._pool:
            self._pool.shutdown(wait=True)
            self._pool = None


def create_executor(threads: int | None = None) -> CandidateExecutor:
    """
    Picks an executor for `threads` workers.

    None means the available hardware parallelism; one or fewer runs serially.
    """
    workers = threads if threads is not None else (os.cpu_count() or 1)
    if workers <= 1:
        return SerialExecutor()
    logger.debug("Thread pool executor", {"workers": workers})
    return ThreadPoolCandidateExecutor(workers)

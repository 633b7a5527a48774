"""
Trial executors.

Executors split a range of trial indices into chunks, run a chunk function
on each and return the chunk results in index order. Chunk functions must
be picklable (module-level functions or ``functools.partial`` of them) so
that the process-pool executor can ship them to workers.
"""

from __future__ import annotations

import concurrent.futures
from abc import ABC, abstractmethod
from typing import Callable, List, Tuple, TypeVar

import structlog

logger = structlog.get_logger()

T = TypeVar("T")

ChunkFn = Callable[[int, int], T]


def chunk_bounds(trials: int, chunks: int) -> List[Tuple[int, int]]:
    """Split ``range(trials)`` into at most ``chunks`` contiguous ``(start, stop)`` pairs."""
    if trials <= 0:
        return []
    chunks = max(1, min(chunks, trials))
    size, extra = divmod(trials, chunks)
    bounds = []
    start = 0
    for index in range(chunks):
        stop = start + size + (1 if index < extra else 0)
        bounds.append((start, stop))
        start = stop
    return bounds


class TrialExecutor(ABC):
    """Abstract base class for trial executors."""

    @property
    @abstractmethod
    def name(self) -> str:
        """Executor name for logging and identification."""
        pass

    @property
    @abstractmethod
    def version(self) -> str:
        pass

    @abstractmethod
    def map_chunks(self, fn: ChunkFn, trials: int) -> List[T]:
        """Run ``fn(start, stop)`` over chunks of ``range(trials)``.

        Returns:
            Chunk results ordered by ``start``
        """
        pass


class SerialExecutor(TrialExecutor):
    """Runs every chunk in the calling process."""

    @property
    def name(self) -> str:
        return "serial"

    @property
    def version(self) -> str:
        return "1.0.0"

    def map_chunks(self, fn: ChunkFn, trials: int) -> List[T]:
        return [fn(start, stop) for start, stop in chunk_bounds(trials, 1)]


class ProcessPoolTrialExecutor(TrialExecutor):
    """Runs chunks on a pool of worker processes.

    Each worker gets ``chunks_per_worker`` chunks on average so that slow
    trials do not leave workers idle.
    """

    def __init__(self, workers: int, chunks_per_worker: int = 4):
        if workers < 1:
            raise ValueError(f"workers must be >= 1 (got {workers})")
        self.workers = workers
        self.chunks_per_worker = chunks_per_worker

    @property
    def name(self) -> str:
        return "process_pool"

    @property
    def version(self) -> str:
        return "1.0.0"

    def map_chunks(self, fn: ChunkFn, trials: int) -> List[T]:
        bounds = chunk_bounds(trials, self.workers * self.chunks_per_worker)
        if len(bounds) <= 1:
            return [fn(start, stop) for start, stop in bounds]
        logger.debug(
            "executor_dispatch",
            executor=self.name,
            workers=self.workers,
            chunks=len(bounds),
            trials=trials,
        )
        with concurrent.futures.ProcessPoolExecutor(max_workers=self.workers) as pool:
            futures = [pool.submit(fn, start, stop) for start, stop in bounds]
            return [future.result() for future in futures]


def get_executor(workers: int = 1) -> TrialExecutor:
    """Factory function to get an executor for a worker count.

    Raises:
        ValueError: If ``workers`` is below 1
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1 (got {workers})")
    if workers == 1:
        return SerialExecutor()
    return ProcessPoolTrialExecutor(workers)

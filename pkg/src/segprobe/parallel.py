"""Order-preserving map with optional thread fan-out."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(func: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> list[R]:
    """Map func over items, preserving input order in the result.

    jobs=1 runs inline (easier tracebacks); jobs>1 uses a thread pool.
    Work items must not depend on shared mutable state for determinism.
    """
    if jobs < 1:
        raise ValueError("jobs must be >= 1")
    seq: Sequence[T] = list(items)
    if jobs == 1 or len(seq) <= 1:
        return [func(item) for item in seq]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, seq))

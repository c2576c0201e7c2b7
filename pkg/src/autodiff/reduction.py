from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

import numpy as np

# configuration objects
from core.config import NUMERIC_SETTINGS

T = TypeVar("T")


def chunk_bounds(n: int, chunk_size: int | None = None) -> list[tuple[int, int]]:
    """Fixed chunk boundaries; depend on ``n`` and the chunk size only."""
    size = chunk_size or NUMERIC_SETTINGS.chunk_size
    return [(start, min(start + size, n)) for start in range(0, n, size)]


def map_chunks(
    fn: Callable[[int, int], T],
    n: int,
    chunk_size: int | None = None,
    num_threads: int | None = None,
) -> list[T]:
    """Apply ``fn(start, stop)`` to every chunk; results come back in chunk order."""
    bounds = chunk_bounds(n, chunk_size)
    workers = num_threads or NUMERIC_SETTINGS.num_threads
    if workers <= 1 or len(bounds) <= 1:
        return [fn(start, stop) for start, stop in bounds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda b: fn(*b), bounds))


def pairwise_sum(items: Sequence[T]) -> T:
    """Sum in a balanced binary tree whose shape depends only on ``len(items)``."""
    if not items:
        raise ValueError("pairwise_sum of an empty sequence")
    level = list(items)
    while len(level) > 1:
        merged = [level[i] + level[i + 1] for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            merged.append(level[-1])
        level = merged
    return level[0]


def pairwise_sum_arrays(items: Sequence[np.ndarray]) -> np.ndarray:
    return np.asarray(pairwise_sum([np.asarray(item, dtype=np.float64) for item in items]))

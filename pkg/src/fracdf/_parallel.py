"""Chunked execution of replication work, optionally across processes."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")

# floats per chunk; depends only on the series length so chunking (and hence
# every floating-point operation) is identical for any worker count
CHUNK_ELEMENTS = 2**21


def chunk_bounds(replications: int, n: int) -> list[tuple[int, int]]:
    size = max(1, CHUNK_ELEMENTS // max(int(n), 1))
    return [(lo, min(lo + size, replications)) for lo in range(0, replications, size)]


def map_chunks(
    func: Callable[[int, int], T],
    bounds: Sequence[tuple[int, int]],
    workers: int = 1,
) -> list[T]:
    """Evaluate ``func(start, stop)`` for every chunk, preserving order.

    ``func`` must be picklable when ``workers > 1`` (module-level function or
    ``functools.partial`` of one).
    """
    if workers is None or workers <= 1 or len(bounds) <= 1:
        return [func(lo, hi) for lo, hi in bounds]
    with ProcessPoolExecutor(max_workers=min(workers, len(bounds))) as pool:
        futures = [pool.submit(func, lo, hi) for lo, hi in bounds]
        return [f.result() for f in futures]

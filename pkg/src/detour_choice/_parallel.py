"""Deterministic chunked evaluation over observations.

Chunk boundaries depend only on the number of observations, never on the
thread count, and partial results are combined in chunk order. Results
are therefore bit-identical whatever the degree of parallelism.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

CHUNK_SIZE = 512
THREADS_ENV = "DETOUR_CHOICE_THREADS"


def resolve_threads(threads: int | None = None) -> int:
    if threads is None:
        env = os.environ.get(THREADS_ENV, "").strip()
        threads = int(env) if env else 1
    if threads < 1:
        raise ValueError("thread count must be >= 1")
    return threads


def chunk_slices(n: int, size: int = CHUNK_SIZE) -> list[slice]:
    return [slice(i, min(i + size, n)) for i in range(0, n, size)]


def ordered_map(fn, items, threads: int = 1) -> list:
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))

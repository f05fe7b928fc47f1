"""Seed-partitioned Monte Carlo.

Work is cut into fixed-size chunks; chunk ``i`` of stream ``key`` draws from
``SeedSequence(seed, spawn_key=(*key, i))``.  Results depend only on the
seed, the stream key and the chunk size, never on the number of workers.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

import numpy as np

__all__ = ["DEFAULT_CHUNK", "chunk_generator", "chunk_sizes", "run_chunked"]

T = TypeVar("T")

DEFAULT_CHUNK = 1 << 15


def chunk_generator(seed: int, key: Sequence[int], chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key) + (int(chunk),))
    return np.random.Generator(np.random.PCG64(ss))


def chunk_sizes(n: int, chunk_size: int = DEFAULT_CHUNK) -> list[int]:
    if n < 1:
        raise ValueError("sample count must be at least 1")
    full, rest = divmod(n, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def run_chunked(
    fn: Callable[[np.random.Generator, int], T],
    n: int,
    *,
    seed: int,
    key: Sequence[int] = (),
    chunk_size: int = DEFAULT_CHUNK,
    workers: int = 1,
) -> list[T]:
    """Apply ``fn(rng, size)`` to every chunk; results come back in chunk order."""
    sizes = chunk_sizes(n, chunk_size)
    jobs = [(chunk_generator(seed, key, i), m) for i, m in enumerate(sizes)]
    if workers <= 1 or len(jobs) == 1:
        return [fn(rng, m) for rng, m in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))

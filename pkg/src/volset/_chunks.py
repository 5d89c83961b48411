"""Deterministic chunked random streams.

Work is cut into fixed-size chunks and chunk ``i`` of stream ``tag`` always
draws from ``default_rng([seed, tag, i])``.  Results therefore depend on the
seed only, never on how many worker threads processed the chunks.
"""
from concurrent.futures import ThreadPoolExecutor
import zlib

import numpy as np

CHUNK = 1 << 18


def stream_id(tag):
    """Stable integer id for a stream name."""
    if isinstance(tag, (int, np.integer)):
        return int(tag)
    return zlib.crc32(str(tag).encode())


def chunk_rng(seed, tag, index):
    if seed is None or int(seed) < 0:
        raise ValueError("seed must be a non-negative integer")
    return np.random.default_rng([int(seed), stream_id(tag), int(index)])


def chunk_bounds(n, chunk=CHUNK):
    return [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]


def map_chunks(fn, n, seed, tag, threads=1, chunk=CHUNK):
    """Apply ``fn(lo, hi, rng)`` to every chunk of ``range(n)``; results in chunk order."""
    bounds = chunk_bounds(n, chunk)
    jobs = [(lo, hi, chunk_rng(seed, tag, i)) for i, (lo, hi) in enumerate(bounds)]
    if threads is None or threads <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))

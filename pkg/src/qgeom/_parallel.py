"""Optional thread fan-out for batched array evaluations.

The worker count comes from ``QGEOM_THREADS`` (default 1).  Results are
merged in input order, so output never depends on scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("QGEOM_THREADS", "1")))
    except ValueError:
        return 1


def map_chunks(fn, items: np.ndarray, min_chunk: int = 64):
    """Apply ``fn`` (array -> tuple of arrays) to contiguous chunks and concatenate in order."""
    workers = thread_count()
    if workers == 1 or len(items) < 2 * min_chunk:
        return fn(items)
    parts = np.array_split(items, min(workers, len(items) // min_chunk))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(fn, parts))
    return tuple(np.concatenate(col) for col in zip(*results))

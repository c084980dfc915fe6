"""Order-preserving map that optionally fans out to worker processes.

The worker count comes from ``SPARSEINV_THREADS`` (default 1, i.e. serial).
Results are always returned in input order, so output never depends on it.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

ENV_VAR = "SPARSEINV_THREADS"
_MIN_PARALLEL_ITEMS = 256


def worker_count() -> int:
    raw = os.environ.get(ENV_VAR, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def pmap(fn, items: list) -> list:
    workers = min(worker_count(), os.cpu_count() or 1)
    if workers <= 1 or len(items) < _MIN_PARALLEL_ITEMS:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=chunk))

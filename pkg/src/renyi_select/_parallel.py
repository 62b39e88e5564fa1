"""Worker-pool helper honoring the RENYI_SELECT_THREADS environment variable."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_VAR = "RENYI_SELECT_THREADS"


def worker_count() -> int:
    """Number of worker threads: RENYI_SELECT_THREADS, 0/unset = auto."""
    raw = os.environ.get(ENV_VAR, "0")
    try:
        requested = int(raw)
    except ValueError:
        requested = 0
    if requested > 0:
        return requested
    return min(4, os.cpu_count() or 1)


def parallel_map(fn, items) -> list:
    """Map fn over items, preserving order; threads are used only when
    more than one worker is configured. Results are identical to the
    serial map regardless of scheduling because each item is independent."""
    items = list(items)
    workers = worker_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))

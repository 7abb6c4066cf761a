"""Order-preserving parallel map over a fork pool.

Workers inherit module globals from the parent, so callers stash read-only
state (catalogs, record tables) in a global before calling ``parallel_map``.
"""

from __future__ import annotations

import multiprocessing as mp
import os

MIN_ITEMS = 64


def default_jobs() -> int:
    return os.cpu_count() or 1


def parallel_map(fn, items, jobs: int | None = 1, min_items: int = MIN_ITEMS) -> list:
    items = list(items)
    if jobs is None:
        jobs = default_jobs()
    if jobs <= 1 or len(items) < min_items or "fork" not in mp.get_all_start_methods():
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * jobs))
    with mp.get_context("fork").Pool(jobs) as pool:
        return pool.map(fn, items, chunksize=chunk)

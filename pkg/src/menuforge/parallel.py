"""Process-pool map for independent LP workloads."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("MENUFORGE_JOBS", "1")))
    except ValueError:
        return 1


def pmap(fn, items, jobs: int | None = None) -> list:
    """``list(map(fn, items))``, on ``jobs`` worker processes when ``jobs > 1``."""
    items = list(items)
    jobs = default_jobs() if jobs is None else jobs
    if jobs <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    chunk = max(1, len(items) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=chunk))

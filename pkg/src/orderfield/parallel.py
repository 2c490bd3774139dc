"""Deterministic fan-out of independent Monte Carlo trials.

Worker count comes from the ORDERSTAT_THREADS environment variable (default
1).  Results are always assembled in trial order, so output is identical at
any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

T = TypeVar("T")

ENV_THREADS = "ORDERSTAT_THREADS"


def worker_count() -> int:
    raw = os.environ.get(ENV_THREADS)
    if raw is None:
        return 1
    try:
        count = int(raw)
    except ValueError as exc:
        raise ValueError(f"{ENV_THREADS} must be a positive integer, got {raw!r}") from exc
    if count < 1:
        raise ValueError(f"{ENV_THREADS} must be a positive integer, got {count}")
    return count


def trial_map(fn: Callable[[int], T], count: int) -> list[T]:
    """Apply ``fn`` to trial indices 0..count-1, merging results in index order."""
    workers = worker_count()
    if workers <= 1 or count <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))

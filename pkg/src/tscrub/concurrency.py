"""Worker-pool helper honoring the TSCRUB_THREADS environment variable."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def worker_count() -> int:
    """Parallelism cap from TSCRUB_THREADS; defaults to 1 (serial)."""
    raw = os.environ.get("TSCRUB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def ordered_map(fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """Map preserving order; runs in a thread pool when allowed to.

    Results are combined by input position, so the output never depends on
    scheduling order.
    """
    workers = worker_count()
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))

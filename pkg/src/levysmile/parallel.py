"""Deterministic parallel map over an index-ordered workload.

Output order is fixed by input index, never by completion order, so results
are identical for any worker count.  LEVY_SMILE_THREADS caps the pool size
(1 disables threading entirely).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
U = TypeVar("U")

_ENV_VAR = "LEVY_SMILE_THREADS"


def max_workers(default: int = 4) -> int:
    raw = os.environ.get(_ENV_VAR)
    if raw is None:
        return max(1, min(default, os.cpu_count() or 1))
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def deterministic_map(fn: Callable[[T], U], items: Sequence[T]) -> list[U]:
    workers = max_workers()
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))

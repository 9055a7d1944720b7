"""Order-preserving parallel map over the outermost quantifier of a check."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def default_workers() -> int:
    return os.cpu_count() or 1


def pmap(fn, items, workers: int | None = 1):
    """Yield ``fn(item)`` in input order.

    With ``workers > 1`` items run on a thread pool (the kernels are numpy and
    release the GIL); results are still yielded in input order, so the first
    failure found is independent of scheduling.
    """
    items = list(items)
    if workers is None:
        workers = default_workers()
    if workers <= 1 or len(items) <= 1:
        for it in items:
            yield fn(it)
        return
    with ThreadPoolExecutor(max_workers=workers) as ex:
        yield from ex.map(fn, items)

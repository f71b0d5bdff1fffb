"""Trial-level parallelism.

Kernels release the GIL, so a thread pool is enough.  Results come back in
input order, which keeps every aggregate independent of scheduling.
"""

import os
from concurrent.futures import ThreadPoolExecutor

__all__ = ["default_threads", "parallel_map"]


def default_threads() -> int:
    env = os.environ.get("YDGROW_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"YDGROW_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def parallel_map(fn, items, threads=None) -> list:
    items = list(items)
    threads = default_threads() if threads is None else max(1, int(threads))
    if threads == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))

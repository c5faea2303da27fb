"""
Bounded worker pool for independent per-degree and per-cell computations.

Workers are threads. They overlap only inside numpy calls that release the GIL
(packed-row eliminations on large matrices); monomial enumeration and coaction
expansion are pure Python and run one at a time whatever the worker count.
TATEFORGE_THREADS therefore caps concurrency; it is not a CPU speedup knob.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

from tateforge.config import settings

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: int = None) -> List[R]:
    """Map fn over items in order; one worker (or one item) runs inline on the caller's thread."""
    items = list(items)
    workers = min(workers or settings.worker_count, len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="tateforge") as pool:
        return list(pool.map(fn, items))

"""Thread-pool helper honoring CHARFLOW_THREADS."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from charflow.core.config import settings

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


def worker_count(n_items: int, threads: Optional[int] = None) -> int:
    """Number of workers for n_items tasks under the configured cap."""
    cap = threads if threads is not None else settings.THREADS
    return max(1, min(cap, n_items))


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """Map fn over items; results come back in input order regardless of scheduling."""
    items = list(items)
    workers = worker_count(len(items), threads)
    if workers == 1:
        return [fn(item) for item in items]
    logger.debug(f"Mapping {len(items)} tasks over {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))

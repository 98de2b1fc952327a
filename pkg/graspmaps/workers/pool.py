# graspmaps/workers/pool.py
"""
Scene worker pool: runs a blocking per-scene function on a thread pool with at
most `jobs` in flight, and hands results back in input order.
"""
from __future__ import annotations

import asyncio
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

from graspmaps.logging import get_logger

T = TypeVar("T")
R = TypeVar("R")

logger = get_logger(__name__)


async def run_pool(items: Sequence[T], fn: Callable[[T], R], jobs: int = 1, label: str = "task") -> List[R]:
    """
    Results come back in the order of `items`, whatever order the workers
    finish in. If any call raises, the error of the earliest failing item is
    re-raised once every call has settled.
    """
    if jobs < 1:
        raise ValueError("jobs must be >= 1")
    if not items:
        return []

    loop = asyncio.get_running_loop()
    sem = asyncio.Semaphore(jobs)

    with ThreadPoolExecutor(max_workers=jobs, thread_name_prefix=f"graspmaps-{label}") as executor:

        async def one(item: T) -> R:
            async with sem:
                return await loop.run_in_executor(executor, fn, item)

        outcomes = await asyncio.gather(*(one(item) for item in items), return_exceptions=True)

    failures = [o for o in outcomes if isinstance(o, BaseException)]
    logger.debug("pool_finished", label=label, items=len(items), jobs=jobs, failed=len(failures))
    if failures:
        raise failures[0]
    return list(outcomes)  # type: ignore[arg-type]

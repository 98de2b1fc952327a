"""
Tests for the scene worker pool.
"""
import threading
import time

import pytest

from graspmaps.workers.pool import run_pool


class TestRunPool:
    """Ordering, error propagation and the concurrency bound."""

    @pytest.mark.asyncio
    async def test_results_follow_input_order(self):
        """Later items finish first, results still come back in input order."""
        def slow_square(x):
            time.sleep(0.002 * (10 - x))
            return x * x

        assert await run_pool(list(range(10)), slow_square, jobs=8) == [x * x for x in range(10)]

    @pytest.mark.asyncio
    async def test_single_job_matches_many(self):
        items = list(range(25))
        assert await run_pool(items, str, jobs=1) == await run_pool(items, str, jobs=6)

    @pytest.mark.asyncio
    async def test_earliest_failure_is_raised(self):
        def check(x):
            if x in (3, 7):
                raise ValueError(f"bad item {x}")
            return x

        with pytest.raises(ValueError, match="bad item 3"):
            await run_pool(list(range(10)), check, jobs=4)

    @pytest.mark.asyncio
    async def test_concurrency_is_bounded(self):
        lock = threading.Lock()
        state = {"running": 0, "peak": 0}

        def work(_):
            with lock:
                state["running"] += 1
                state["peak"] = max(state["peak"], state["running"])
            time.sleep(0.005)
            with lock:
                state["running"] -= 1

        await run_pool(list(range(20)), work, jobs=3)
        assert 1 <= state["peak"] <= 3

    @pytest.mark.asyncio
    async def test_empty_and_bad_jobs(self):
        assert await run_pool([], str, jobs=2) == []
        with pytest.raises(ValueError):
            await run_pool([1], str, jobs=0)

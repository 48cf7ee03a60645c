from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
import logging
from typing import TypeVar

from app.config import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def run_jobs(fn: Callable[[T], R], items: Iterable[T], max_workers: int | None = None) -> list[R]:
    """Apply fn to every item, returning results in input order.

    Runs serially unless more than one worker is configured.
    """
    jobs = list(items)
    workers = max_workers if max_workers is not None else settings.mpf_max_workers
    if workers <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    logger.debug(f"Running {len(jobs)} jobs on {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))

"""
Thread-pool fan-out for grid sweeps.

Results come back in input order regardless of completion order, so reports do
not depend on scheduling.
"""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Optional, Sequence, TypeVar

from tqdm import tqdm

from src.utils.config import config

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(
    fn: Callable[[T], R],
    items: Sequence[T],
    desc: str = "Processing",
    max_workers: Optional[int] = None
) -> list[R]:
    """
    Apply fn to every item on a thread pool.

    Args:
        fn: Pure function of one item
        items: Inputs
        desc: Progress bar label
        max_workers: Pool size (default: from config)

    Returns:
        List of results aligned with items.

    Raises:
        The first exception raised by any worker, after logging the failing index.
    """
    workers = max_workers or config.max_workers
    results: list[Optional[R]] = [None] * len(items)

    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(fn, item): i for i, item in enumerate(items)}

        for future in tqdm(as_completed(futures), total=len(futures), desc=desc, disable=None):
            i = futures[future]
            try:
                results[i] = future.result()
            except Exception as e:
                logger.error(f"{desc}: item {i} failed: {e}")
                raise

    return results

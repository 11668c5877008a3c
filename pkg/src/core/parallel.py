"""Thread-capped mapping for read-only scans."""

from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor

from src.config import get_settings


def parallel_map[T, R](func: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Map func over items with at most QNUCLEUS_THREADS workers, preserving order."""
    items = list(items)
    workers = min(get_settings().worker_count, max(len(items), 1))
    if workers == 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))

"""Small shared helpers."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from .errors import ConfigurationError

THREADS_ENV_VAR = "WAVESCALE_THREADS"


def resolve_threads(threads=None) -> int:
    """Thread count from an explicit value or the WAVESCALE_THREADS variable."""
    if threads is None:
        raw = os.environ.get(THREADS_ENV_VAR)
        threads = int(raw) if raw else 1
    threads = int(threads)
    if threads < 1:
        raise ConfigurationError(f"thread count must be >= 1, got {threads}")
    return threads


def map_ordered(fn, items, threads=1) -> list:
    """Apply ``fn`` to items, optionally on a thread pool.

    Results come back in input order, so output is identical for any
    thread count as long as ``fn`` is deterministic per item.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def format_float(x: float) -> str:
    """Shortest round-trip decimal form, stable across runs."""
    return repr(float(x))

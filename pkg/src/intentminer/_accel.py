"""Runtime switches: numba on/off and the worker-thread cap.

``INTENTMINER_NUMBA=0`` forces the pure-numpy kernels even when numba is
installed.  ``INTENTMINER_THREADS`` caps thread-level parallelism (default 1).
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

_OFF = {"0", "false", "no", "off"}


def numba_requested() -> bool:
    return os.environ.get("INTENTMINER_NUMBA", "1").strip().lower() not in _OFF


try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and numba_requested()


def max_threads() -> int:
    raw = os.environ.get("INTENTMINER_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"INTENTMINER_THREADS must be an integer, got {raw!r}") from None
    return max(1, value)


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Order-preserving map, threaded when ``INTENTMINER_THREADS`` > 1."""
    items = list(items)
    n = min(max_threads(), len(items))
    if n <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))

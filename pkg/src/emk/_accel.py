"""Numba switch.

Kernels are compiled with numba unless ``EMK_NO_JIT`` is set to a non-empty,
non-zero value (or numba is missing), in which case the plain Python / numpy
fallbacks run instead.  ``EMK_THREADS`` caps numba's thread pool.
"""

import os


def _flag(name: str) -> bool:
    return os.environ.get(name, "").strip() not in ("", "0")


def thread_cap() -> int:
    """Thread count requested through EMK_THREADS (default 1)."""
    raw = os.environ.get("EMK_THREADS", "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"EMK_THREADS must be a positive integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"EMK_THREADS must be a positive integer, got {raw!r}")
    return value


def njit(*args, **kwargs):
    """``numba.njit(cache=True)`` or an identity decorator when JIT is off."""
    if USE_NUMBA:
        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def _identity(fn):
        return fn

    return _identity


def effective_threads() -> int:
    """EMK_THREADS clamped to the processors actually available."""
    return max(1, min(thread_cap(), os.cpu_count() or 1))


# Must happen before numba is imported: the pool size is fixed at import time.
try:
    os.environ.setdefault("NUMBA_NUM_THREADS", str(effective_threads()))
except ValueError:  # reported by the CLI; never fail at import
    pass

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and not _flag("EMK_NO_JIT")

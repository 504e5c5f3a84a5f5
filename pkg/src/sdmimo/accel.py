"""Optional numba acceleration.

Hot kernels are written so that they run unchanged as plain numpy code.
Set the environment variable ``SDMIMO_NO_NUMBA=1`` before import to skip
JIT compilation and use the pure-numpy path (useful for debugging and as
a reference for benchmarks; see benchmarks/benchmark_numba.py).
"""
from __future__ import annotations

import os

NUMBA_ENABLED = os.environ.get("SDMIMO_NO_NUMBA", "").lower() not in ("1", "true", "yes")

if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:

    def njit(func=None, **kwargs):
        if func is not None:
            return func

        def wrapper(f):
            return f

        return wrapper


def jit_kernel(func):
    """Decorator for hot numeric kernels: numba njit, or identity."""
    if NUMBA_ENABLED:
        return njit(cache=True)(func)
    return func

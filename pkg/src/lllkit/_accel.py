"""Numba switch.

Set ``LLLKIT_DISABLE_NUMBA=1`` before import to force the pure-numpy
kernels even when numba is installed.
"""

from __future__ import annotations

import os
import warnings

warnings.filterwarnings("ignore", message="The TBB threading layer")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False

DISABLED = os.environ.get("LLLKIT_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")
USE_NUMBA = HAVE_NUMBA and not DISABLED


def njit(*args, **kwargs):
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)

    def decorator(func):
        return func

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return decorator


if HAVE_NUMBA:
    prange = numba.prange
else:  # pragma: no cover
    prange = range


def set_threads(count: int) -> None:
    """Cap the worker threads used by parallel kernels."""
    if HAVE_NUMBA and count > 0:
        numba.set_num_threads(min(count, numba.config.NUMBA_NUM_THREADS))

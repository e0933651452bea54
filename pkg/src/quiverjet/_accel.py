"""Numba switch for the hot kernels.

Kernels are written once as plain loops over numpy arrays.  When numba is
importable and ``QUIVERJET_DISABLE_NUMBA`` is unset (or ``0``), they are
compiled with ``numba.njit``; otherwise the same source runs as ordinary
Python, which is slow but dependency-free and handy for debugging.
"""

from __future__ import annotations

import os
import warnings

_flag = os.environ.get("QUIVERJET_DISABLE_NUMBA", "0").strip().lower()
DISABLED = _flag not in ("", "0", "false", "no")

try:
    if DISABLED:
        raise ImportError("numba disabled by QUIVERJET_DISABLE_NUMBA")
    import numba

    HAVE_NUMBA = True
    # single-core containers often ship an old TBB; numba falls back on its own
    warnings.filterwarnings("ignore", message="The TBB threading layer")
except ImportError:
    numba = None
    HAVE_NUMBA = False


def jit(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


def jit_parallel(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True, parallel=True)(fn)
    return fn


if HAVE_NUMBA:
    prange = numba.prange
else:
    prange = range


def set_threads(n: int | None) -> None:
    """Forward a thread count to numba; no-op on the pure path."""
    if n is None or not HAVE_NUMBA:
        return
    n = max(1, min(int(n), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)


def backend() -> str:
    return "numba" if HAVE_NUMBA else "python"

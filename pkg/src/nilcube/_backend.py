"""Kernel backend selection.

Hot numeric kernels are compiled with numba when it is installed; a
pure-numpy implementation of each kernel is kept as a fallback.  The
choice is made once at import time from the environment:

    NILCUBE_BACKEND=numba   require numba (error if missing)
    NILCUBE_BACKEND=numpy   force the numpy fallback
    NILCUBE_BACKEND=auto    numba if available (default)
"""

from __future__ import annotations

import os

try:
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via NILCUBE_BACKEND=numpy
    _njit = None
    HAVE_NUMBA = False

_MODE = os.environ.get("NILCUBE_BACKEND", "auto").lower()
if _MODE not in ("auto", "numba", "numpy"):
    raise RuntimeError(f"NILCUBE_BACKEND={_MODE!r}: expected auto|numba|numpy")
if _MODE == "numba" and not HAVE_NUMBA:
    raise RuntimeError("NILCUBE_BACKEND=numba but numba is not installed")

USE_NUMBA = HAVE_NUMBA and _MODE != "numpy"


def jit(fn):
    """Compile a kernel with numba when enabled, else return it unchanged."""
    if USE_NUMBA:
        return _njit(cache=True)(fn)
    return fn


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"

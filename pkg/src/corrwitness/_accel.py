"""Backend selection for the numeric kernels.

Set ``CORRWITNESS_NUMBA=0`` to force the pure-numpy path. The flag is read
once at import time.
"""

import os

_FALSY = {"0", "false", "no", "off"}

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_REQUESTED = os.environ.get("CORRWITNESS_NUMBA", "1").strip().lower() not in _FALSY
HAS_NUMBA = numba is not None
USE_NUMBA = NUMBA_REQUESTED and HAS_NUMBA


def njit(func):
    """Compile ``func`` with numba when available, else return it unchanged."""
    if not HAS_NUMBA:
        return func
    return numba.njit(cache=True, nogil=True)(func)

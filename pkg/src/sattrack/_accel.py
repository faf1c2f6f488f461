"""Optional numba acceleration.

Set ``SATTRACK_DISABLE_NUMBA=1`` to force the pure-numpy code paths even when
numba is importable. The flag is read once, at import time.
"""
import os

try:
    import numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is installed in CI
    numba = None
    HAVE_NUMBA = False

_DISABLED = os.environ.get("SATTRACK_DISABLE_NUMBA", "").strip().lower() in (
    "1", "true", "yes", "on")

USE_NUMBA = HAVE_NUMBA and not _DISABLED


def njit(func):
    """Compile ``func`` with numba when available, else return it unchanged.

    The returned object is always callable from Python; without numba it is
    just the plain interpreted function (slow, but correct).
    """
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True, nogil=True)(func)

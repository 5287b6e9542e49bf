"""Backend selection for the compiled kernels.

Set ``RTTSTATS_DISABLE_NUMBA=1`` to force the pure-numpy code paths, e.g. for
debugging or on platforms without numba.  The flag is read once at import.
"""
import functools
import os

DISABLE_ENV = "RTTSTATS_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


def _disabled_by_env():
    return os.environ.get(DISABLE_ENV, "").strip().lower() not in ("", "0", "false", "no")


HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not _disabled_by_env()
BACKEND = "numba" if USE_NUMBA else "numpy"

if HAVE_NUMBA:
    njit = functools.partial(numba.njit, cache=True, nogil=True)
else:  # pragma: no cover
    njit = None


def select(loop_impl, numpy_impl):
    """Return the jitted loop kernel when numba is active, else the numpy twin."""
    if USE_NUMBA:
        return njit(loop_impl)
    return numpy_impl

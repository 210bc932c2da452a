"""numba switch.

Set ``PSCF_DISABLE_NUMBA=1`` to run the int64 kernels as plain Python over
numpy arrays (the fallback path); otherwise they are compiled with
``numba.njit`` when numba is importable.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

DISABLED = os.environ.get("PSCF_DISABLE_NUMBA", "").strip() not in ("", "0")
ENABLED = numba is not None and not DISABLED


def jit(fn):
    if ENABLED:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


def python_impl(fn):
    """The undecorated function behind a possibly-jitted kernel."""
    return getattr(fn, "py_func", fn)

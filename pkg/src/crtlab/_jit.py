"""Numba glue: decide once, at import time, whether hot kernels are compiled.

Set ``CRTLAB_NO_JIT=1`` (or ``true``/``yes``) to force the pure
numpy/Python fallback path, e.g. for debugging or on machines without a
working numba install.  The flag is read at import time; changing it later
in the same process has no effect.
"""
from __future__ import annotations

import os

_FLAG = os.environ.get("CRTLAB_NO_JIT", "").strip().lower()
_DISABLED = _FLAG in {"1", "true", "yes", "on"}

USING_NUMBA = False
njit = None

if not _DISABLED:
    try:
        from numba import njit as _numba_njit

        USING_NUMBA = True

        def njit(func):
            return _numba_njit(cache=True)(func)

    except ImportError:
        USING_NUMBA = False

if not USING_NUMBA:

    def njit(func):
        return func

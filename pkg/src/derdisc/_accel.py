"""Optional numba acceleration.

Kernels are written once as plain numpy code and compiled with
``numba.njit`` when numba is importable and ``DERDISC_DISABLE_NUMBA`` is not
set to a truthy value. The uncompiled function is always kept as the
fallback path, so both routes can be benchmarked against each other.
"""

from __future__ import annotations

import os

_FLAG = "DERDISC_DISABLE_NUMBA"


def _env_disabled() -> bool:
    return os.environ.get(_FLAG, "").strip().lower() not in ("", "0", "false", "no")


try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is an optional speedup
    _numba = None

NUMBA_AVAILABLE = _numba is not None
USE_NUMBA = NUMBA_AVAILABLE and not _env_disabled()


def njit(func):
    """Compile ``func`` with numba, or return None when numba is missing."""
    if _numba is None:
        return None
    return _numba.njit(cache=True, nogil=True)(func)

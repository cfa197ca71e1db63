"""Optional numba acceleration.

Set ``DRSUB_DISABLE_NUMBA=1`` to force the pure-numpy kernels, e.g. when
numba is unavailable or to cross-check the compiled path.
"""

import os

_FLAG = os.environ.get("DRSUB_DISABLE_NUMBA", "").strip().lower()

try:
    import numba as _numba
except ImportError:  # pragma: no cover - exercised only without numba
    _numba = None

NUMBA_AVAILABLE = _numba is not None
USE_NUMBA = NUMBA_AVAILABLE and _FLAG not in ("1", "true", "yes", "on")


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise an identity decorator.

    The wrapped function stays importable either way; whether it is called
    is decided by the dispatchers in :mod:`drsub.kernels`.
    """
    if NUMBA_AVAILABLE:
        kwargs.setdefault("cache", True)
        return _numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn

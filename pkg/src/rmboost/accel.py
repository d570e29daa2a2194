"""Kernel dispatch between numba-compiled and pure-numpy execution paths.

The hot numeric kernels in :mod:`rmboost.kernels` are written once, in a
numpy style that numba can compile in nopython mode.  At import time each
kernel is bound either to its ``@njit``-compiled form or to the plain
function, controlled by:

* ``RMBOOST_DISABLE_NUMBA=1`` in the environment selects the pure-numpy
  path explicitly;
* an unavailable numba package falls back to pure numpy automatically;
* numba's own ``NUMBA_DISABLE_JIT`` is honoured by numba itself.

``benchmarks/bench_kernels.py`` times both paths side by side.
"""

from __future__ import annotations

import os

ENV_FLAG = "RMBOOST_DISABLE_NUMBA"

try:
    import numba as _numba

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    _numba = None
    NUMBA_AVAILABLE = False

# numba compiles matrix np.dot against scipy's BLAS bindings; without scipy
# the compiled path would fail at first use, so fall back to pure numpy.
try:
    import scipy.linalg.cython_blas  # noqa: F401

    _BLAS_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without scipy installed
    _BLAS_AVAILABLE = False


def _flag_disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() in ("1", "true", "yes", "on")


NUMBA_ENABLED = NUMBA_AVAILABLE and _BLAS_AVAILABLE and not _flag_disabled()


def jit_compile(func):
    """Return the numba-compiled form of func (requires numba)."""
    if not NUMBA_AVAILABLE:
        raise RuntimeError("numba is not available in this environment")
    return _numba.njit(cache=True)(func)


def maybe_jit(func):
    """Compile func when the numba path is enabled, else return it unchanged."""
    if NUMBA_ENABLED:
        return jit_compile(func)
    return func

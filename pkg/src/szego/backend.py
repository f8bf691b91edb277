"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly and the
truncation is small enough for direct convolution to win; otherwise
the numpy fallback runs (which itself switches to a padded FFT above
``DIRECT_LIMIT`` modes).  Set ``SZEGO_PURE_PYTHON=1`` to force the
fallback, e.g. for benchmarking the two against each other.
"""

import os

import numpy as np

from szego import _kernels_py

_FORCE_PY = bool(os.environ.get("SZEGO_PURE_PYTHON"))

try:
    from szego import _kernels as _ext
except ImportError:  # extension not built; fallback covers everything
    _ext = None

HAVE_EXTENSION = _ext is not None
DIRECT_LIMIT = _kernels_py.DIRECT_LIMIT


def backend_name(size=0):
    """Name of the kernel implementation used for a given truncation."""
    if _ext is not None and not _FORCE_PY and size <= DIRECT_LIMIT:
        return "cython"
    return "numpy-fft" if size > DIRECT_LIMIT else "numpy"


def cubic_projected(u, out_len):
    """Coefficients 0..out_len-1 of the analytic projection of |u|^2 u."""
    u = np.ascontiguousarray(u, dtype=np.complex128)
    if _ext is not None and not _FORCE_PY and len(u) <= DIRECT_LIMIT:
        return _ext.cubic_projected(u, out_len)
    return _kernels_py.cubic_projected(u, out_len)


def rk4_evolve(u0, dt, nsteps):
    """Advance the Galerkin-truncated flow by nsteps fixed RK4 steps."""
    u0 = np.ascontiguousarray(u0, dtype=np.complex128)
    if _ext is not None and not _FORCE_PY and len(u0) <= DIRECT_LIMIT:
        return _ext.rk4_evolve(u0, dt, nsteps)
    return _kernels_py.rk4_evolve(u0, dt, nsteps)

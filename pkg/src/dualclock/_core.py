"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy fallback is used. Setting ``DUALCLOCK_PURE_PYTHON=1`` forces the
fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

if os.environ.get("DUALCLOCK_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"


def _f64(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.float64)


def ols_centered(x, y) -> tuple[float, float, float]:
    return _impl.ols_centered(_f64(x), _f64(y))


def ridge_sse(x, y, d_grid, theta_grid) -> np.ndarray:
    return _impl.ridge_sse(_f64(x), _f64(y), _f64(d_grid), _f64(theta_grid))

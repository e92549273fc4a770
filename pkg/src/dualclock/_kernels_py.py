"""Pure-numpy regression kernels, used when the compiled module is absent."""

from __future__ import annotations

import numpy as np

from .errors import RankError


def ols_centered(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Ordinary least squares ``y ~ slope*x + intercept`` in centered form.

    Returns ``(slope, intercept, mean squared residual)``.
    """
    n = x.shape[0]
    if n < 2:
        raise RankError(f"regression needs at least 2 records, got {n}")
    xbar = x.mean()
    ybar = y.mean()
    scale = max(1.0, abs(xbar))
    dx = x - xbar
    dy = y - ybar
    sxx = float(dx @ dx)
    if not (x.max() - x.min() > 1e-12 * scale) or sxx == 0.0:
        raise RankError("regressor t_m has no spread")
    slope = float(dx @ dy) / sxx
    r = dy - slope * dx
    return slope, float(ybar - slope * xbar), float(r @ r) / n


def ridge_sse(x: np.ndarray, y: np.ndarray, d_grid: np.ndarray, theta_grid: np.ndarray) -> np.ndarray:
    """SSE of ``y - theta = a*(x + d)`` with ``a`` re-fit at every grid cell.

    Output shape is ``(len(d_grid), len(theta_grid))``.
    """
    out = np.empty((d_grid.shape[0], theta_grid.shape[0]))
    w = y[None, :] - theta_grid[:, None]
    for j, d in enumerate(d_grid):
        u = x + d
        suu = float(u @ u)
        if suu == 0.0:
            raise RankError("profiled skew fit is degenerate: all t_m + D are zero")
        a = (w @ u) / suu
        r = w - a[:, None] * u[None, :]
        out[j] = np.einsum("ij,ij->i", r, r)
    return out

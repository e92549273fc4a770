# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled regression kernels. Same contract as ``_kernels_py``."""

import numpy as np

from .errors import RankError


def ols_centered(const double[::1] x, const double[::1] y):
    cdef Py_ssize_t n = x.shape[0], i
    cdef double xbar = 0.0, ybar = 0.0, sxx = 0.0, sxy = 0.0, dx, r, sse = 0.0
    cdef double slope, scale
    if n < 2:
        raise RankError(f"regression needs at least 2 records, got {n}")
    for i in range(n):
        xbar += x[i]
        ybar += y[i]
    xbar /= n
    ybar /= n
    cdef double xmin = x[0], xmax = x[0]
    for i in range(n):
        if x[i] < xmin:
            xmin = x[i]
        if x[i] > xmax:
            xmax = x[i]
        dx = x[i] - xbar
        sxx += dx * dx
        sxy += dx * (y[i] - ybar)
    scale = abs(xbar)
    if scale < 1.0:
        scale = 1.0
    if not (xmax - xmin > 1e-12 * scale) or sxx == 0.0:
        raise RankError("regressor t_m has no spread")
    slope = sxy / sxx
    for i in range(n):
        r = (y[i] - ybar) - slope * (x[i] - xbar)
        sse += r * r
    return slope, ybar - slope * xbar, sse / n


def ridge_sse(const double[::1] x, const double[::1] y,
              const double[::1] d_grid, const double[::1] theta_grid):
    cdef Py_ssize_t n = x.shape[0], nd = d_grid.shape[0], nt = theta_grid.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double d, th, u, w, suu, swu, a, r, sse
    out = np.empty((nd, nt), dtype=np.float64)
    cdef double[:, ::1] o = out
    for j in range(nd):
        d = d_grid[j]
        suu = 0.0
        for i in range(n):
            u = x[i] + d
            suu += u * u
        if suu == 0.0:
            raise RankError("profiled skew fit is degenerate: all t_m + D are zero")
        for k in range(nt):
            th = theta_grid[k]
            swu = 0.0
            for i in range(n):
                swu += (y[i] - th) * (x[i] + d)
            a = swu / suu
            sse = 0.0
            for i in range(n):
                r = (y[i] - th) - a * (x[i] + d)
                sse += r * r
            o[j, k] = sse
    return out

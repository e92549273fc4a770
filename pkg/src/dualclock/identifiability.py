"""Why delay and offset cannot be separated from one-way timestamps.

The corrected reception model for slave clock ``k`` (``k`` = 1 or 2, with
multiplier ``c_1 = 2``, ``c_2 = 1``) is::

    T_sk.i = c_k * ((1 + eps) * (T_m.i + D) + theta)

Its partial derivatives with respect to ``D`` and ``theta`` are
``c_k * (1 + eps)`` and ``c_k``, so the two Jacobian columns are exactly
proportional and the Fisher information is singular. In the original
dual-clock model ``theta`` enters slave 1 with coefficient 1, which breaks
the proportionality and gives an (illusory) full-rank design.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from . import _core
from .clocks import SLAVE1_RATE_MULTIPLIER
from .errors import DomainError, RankError
from .protocol import SyncRecord, as_arrays

MODELS = ("corrected", "chin_chen")


@dataclass(frozen=True)
class DesignMatrix:
    """Jacobian of the reception model, columns ``[d/d eps, d/d D, d/d theta]``.

    Rows are the slave-2 equations, followed by the slave-1 equations when
    ``use_both_equations`` is set.
    """

    rows: np.ndarray
    n_records: int
    use_both_equations: bool
    model: str = "corrected"

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows.shape


@dataclass(frozen=True)
class RankReport:
    singular_values: tuple[float, ...]
    numerical_rank: int
    collinearity_index: float
    tol: float = 1e-10

    def to_dict(self) -> dict:
        d = asdict(self)
        d["singular_values"] = list(self.singular_values)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


@dataclass(frozen=True)
class RidgeSurface:
    d_grid: np.ndarray
    theta_grid: np.ndarray
    sse: np.ndarray  # shape (len(d_grid), len(theta_grid))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("d", "theta", "sse"))
        for j, d in enumerate(self.d_grid.tolist()):
            for k, th in enumerate(self.theta_grid.tolist()):
                w.writerow((format(d, ".17g"), format(th, ".17g"), format(float(self.sse[j, k]), ".17g")))
        return buf.getvalue()

    def valley(self) -> tuple[np.ndarray, np.ndarray]:
        """Offset minimizing the SSE in each delay column.

        Each column is exactly quadratic in theta, so the vertex of a
        least-squares parabola through the column locates the minimum
        off-grid.
        """
        if self.theta_grid.shape[0] < 3:
            raise DomainError("valley location needs at least 3 theta grid points")
        c = float(np.mean(self.theta_grid))
        s = float(np.ptp(self.theta_grid)) or 1.0
        z = (self.theta_grid - c) / s
        mins = np.empty(self.d_grid.shape[0])
        for j in range(self.d_grid.shape[0]):
            a2, a1, _ = np.polyfit(z, self.sse[j], 2)
            mins[j] = c - s * a1 / (2.0 * a2)
        return self.d_grid.copy(), mins


def build_design_matrix(
    records: Sequence[SyncRecord],
    linearization: tuple[float, float, float] = (0.0, 0.0, 0.0),
    use_both_equations: bool = False,
    model: str = "corrected",
    center: bool = False,
) -> DesignMatrix:
    """Jacobian of the reception model at ``linearization = (eps, D, theta)``.

    ``model="chin_chen"`` builds the original model, where theta enters the
    slave-1 equation with coefficient 1. ``center=True`` subtracts the mean
    departure time from ``T_m`` first (a reparameterization of theta to the
    mean epoch that leaves the rank unchanged and improves conditioning).
    """
    if model not in MODELS:
        raise DomainError(f"model must be one of {MODELS}, got {model!r}")
    if len(records) < 1:
        raise DomainError("design matrix needs at least one record")
    eps, d, _ = linearization
    t_m = as_arrays(records)[0]
    if center:
        t_m = t_m - t_m.mean()
    x = t_m + d
    ones = np.ones_like(x)
    rows = np.column_stack((x, (1.0 + eps) * ones, ones))
    if use_both_equations:
        c = SLAVE1_RATE_MULTIPLIER
        theta_col = c * ones if model == "corrected" else ones
        rows1 = np.column_stack((c * x, c * (1.0 + eps) * ones, theta_col))
        rows = np.vstack((rows, rows1))
    return DesignMatrix(rows=rows, n_records=len(records), use_both_equations=use_both_equations, model=model)


def _as_matrix(m) -> np.ndarray:
    return np.asarray(m.rows if isinstance(m, DesignMatrix) else m, dtype=float)


def rank_analysis(m, tol: float = 1e-10) -> RankReport:
    """Singular values (LAPACK divide-and-conquer SVD) and numerical rank.

    The collinearity index is ``sigma_min / sigma_max`` of the last two
    columns, which for a :class:`DesignMatrix` are the delay and offset
    columns.
    """
    a = _as_matrix(m)
    if a.ndim != 2 or a.size == 0:
        raise DomainError("rank analysis needs a non-empty 2-D matrix")
    sv = np.linalg.svd(a, compute_uv=False)
    smax = float(sv[0])
    rank = int(np.sum(sv > tol * smax)) if smax > 0.0 else 0
    sub = a[:, -2:] if a.shape[1] >= 2 else a
    sv2 = np.linalg.svd(sub, compute_uv=False)
    coll = float(sv2[-1] / sv2[0]) if sv2[0] > 0.0 else 0.0
    return RankReport(
        singular_values=tuple(float(s) for s in sv),
        numerical_rank=rank,
        collinearity_index=coll,
        tol=tol,
    )


def fisher_information(m: DesignMatrix, sigma) -> np.ndarray:
    """Gaussian Fisher information ``M^T W M``.

    ``sigma`` is one jitter standard deviation or a pair ``(sigma1, sigma2)``;
    slave-2 rows are weighted by ``1/sigma2**2`` and slave-1 rows by
    ``1/sigma1**2``.
    """
    if np.ndim(sigma) == 0:
        s1 = s2 = float(sigma)
    else:
        s1, s2 = (float(v) for v in sigma)
    if not (s1 > 0.0 and s2 > 0.0):
        raise DomainError(f"jitter sigma must be > 0, got {sigma!r}")
    a = _as_matrix(m)
    n = m.n_records if isinstance(m, DesignMatrix) else a.shape[0]
    w = np.full(a.shape[0], 1.0 / s2**2)
    w[n:] = 1.0 / s1**2
    return a.T @ (w[:, None] * a)


def symmetric3_eigenvalues(g: np.ndarray) -> np.ndarray:
    """Eigenvalues of a symmetric 3x3 matrix from its characteristic cubic.

    Trigonometric solution of ``det(g - lambda*I) = 0``; returned in
    descending order. Independent of any LAPACK routine.
    """
    g = np.asarray(g, dtype=float)
    if g.shape != (3, 3):
        raise DomainError("expected a 3x3 matrix")
    p1 = g[0, 1] ** 2 + g[0, 2] ** 2 + g[1, 2] ** 2
    q = (g[0, 0] + g[1, 1] + g[2, 2]) / 3.0
    if p1 == 0.0:
        return np.sort(np.diag(g))[::-1].copy()
    p2 = (g[0, 0] - q) ** 2 + (g[1, 1] - q) ** 2 + (g[2, 2] - q) ** 2 + 2.0 * p1
    p = math.sqrt(p2 / 6.0)
    b = (g - q * np.eye(3)) / p
    det_b = (
        b[0, 0] * (b[1, 1] * b[2, 2] - b[1, 2] * b[2, 1])
        - b[0, 1] * (b[1, 0] * b[2, 2] - b[1, 2] * b[2, 0])
        + b[0, 2] * (b[1, 0] * b[2, 1] - b[1, 1] * b[2, 0])
    )
    r = min(1.0, max(-1.0, det_b / 2.0))
    phi = math.acos(r) / 3.0
    e1 = q + 2.0 * p * math.cos(phi)
    e3 = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    e2 = 3.0 * q - e1 - e3
    return np.array([e1, e2, e3])


def ridge_scan(
    records: Sequence[SyncRecord],
    d_range: tuple[float, float],
    theta_range: tuple[float, float],
    grid_n: int,
    d_grid: np.ndarray | None = None,
    theta_grid: np.ndarray | None = None,
) -> RidgeSurface:
    """SSE of the slave-2 reception model over a (delay, offset) grid.

    At each grid cell delay and offset are held fixed and the skew is re-fit
    by least squares. Explicit ``d_grid``/``theta_grid`` override the
    ranges.
    """
    if d_grid is None or theta_grid is None:
        if int(grid_n) < 1:
            raise DomainError(f"grid_n must be >= 1, got {grid_n!r}")
        lo_hi = (*d_range, *theta_range)
        if not all(math.isfinite(v) for v in lo_hi):
            raise DomainError("grid ranges must be finite")
    if d_grid is None:
        d_grid = np.linspace(d_range[0], d_range[1], int(grid_n))
    if theta_grid is None:
        theta_grid = np.linspace(theta_range[0], theta_range[1], int(grid_n))
    if len(records) < 2:
        raise RankError(f"ridge scan needs at least 2 records, got {len(records)}")
    t_m, _, t_s2 = as_arrays(records)
    _core.ols_centered(t_m, t_s2)  # raises RankError when t_m has no spread
    d_grid = np.asarray(d_grid, dtype=float)
    theta_grid = np.asarray(theta_grid, dtype=float)
    return RidgeSurface(d_grid=d_grid, theta_grid=theta_grid, sse=_core.ridge_sse(t_m, t_s2, d_grid, theta_grid))


def fit_line(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """``(slope, intercept)`` of a centered least-squares line."""
    slope, icpt, _ = _core.ols_centered(x, y)
    return slope, icpt

"""Skew, delay and offset estimators for one-way dual-clock timestamps.

All three estimators are ordinary least squares fits, which coincide with
maximum likelihood under i.i.d. Gaussian jitter.

``estimate_chin_chen``
    Reconstruction of the original dual-clock scheme. Regresses
    ``T_s1 - T_s2`` on ``T_m`` for skew and delay and averages
    ``2*T_s2 - T_s1`` for the common offset. Exact on data from its own
    model. On physically generated data with a simultaneous start the
    offset statistic is identically zero and the offset leaks into the
    delay estimate.
``estimate_corrected``
    Fits only what one-way timestamps identify: the skew and the combined
    intercept ``psi = (1+eps)*D + theta``.
``estimate_baseline``
    The same fit, reading the full intercept as offset (delay assumed 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _core
from .clocks import SLAVE1_RATE_MULTIPLIER
from .errors import DomainError, RankError
from .protocol import SyncRecord, as_arrays


@dataclass(frozen=True)
class ChinChenEstimate:
    epsilon_hat: float
    d_hat: float
    theta_hat: float
    residual_var: float


@dataclass(frozen=True)
class CorrectedEstimate:
    epsilon_hat: float
    psi_hat: float
    residual_var: float


@dataclass(frozen=True)
class BaselineEstimate:
    epsilon_hat: float
    theta_hat: float


def _columns(records: Sequence[SyncRecord]):
    if len(records) < 2:
        raise RankError(f"need at least 2 Sync records, got {len(records)}")
    return as_arrays(records)


def estimate_chin_chen(records: Sequence[SyncRecord]) -> ChinChenEstimate:
    t_m, t_s1, t_s2 = _columns(records)
    slope, icpt, rvar = _core.ols_centered(t_m, t_s1 - t_s2)
    if not slope > 0.0:
        raise DomainError(f"fitted slope {slope!r} implies skew <= -1")
    theta_hat = float(np.mean(SLAVE1_RATE_MULTIPLIER * t_s2 - t_s1))
    return ChinChenEstimate(
        epsilon_hat=slope - 1.0,
        d_hat=icpt / slope,
        theta_hat=theta_hat,
        residual_var=rvar,
    )


def _pool(fits: list[tuple[float, float, float]]) -> tuple[float, float, float]:
    # inverse-variance weights from the residual variances; a noiseless fit wins outright
    exact = [f for f in fits if f[2] == 0.0]
    if exact:
        fits = exact
        w = [1.0] * len(fits)
    else:
        w = [1.0 / f[2] for f in fits]
    tot = math.fsum(w)
    slope = math.fsum(wk * f[0] for wk, f in zip(w, fits)) / tot
    icpt = math.fsum(wk * f[1] for wk, f in zip(w, fits)) / tot
    return slope, icpt, math.fsum(f[2] for f in fits) / len(fits)


def estimate_corrected(records: Sequence[SyncRecord], pooling: bool = False) -> CorrectedEstimate:
    """Skew and combined intercept from the slave-2 reception equation.

    With ``pooling=True`` the slave-1 timestamps, halved, are fitted as a
    second regression and the two fits are merged with inverse-variance
    weights. Pooling assumes a simultaneous start, otherwise the slave-1
    intercept differs from ``psi``.
    """
    t_m, t_s1, t_s2 = _columns(records)
    fit = _core.ols_centered(t_m, t_s2)
    if pooling:
        fit1 = _core.ols_centered(t_m, t_s1 / SLAVE1_RATE_MULTIPLIER)
        fit = _pool([fit, fit1])
    slope, icpt, rvar = fit
    return CorrectedEstimate(epsilon_hat=slope - 1.0, psi_hat=icpt, residual_var=rvar)


def estimate_baseline(records: Sequence[SyncRecord]) -> BaselineEstimate:
    est = estimate_corrected(records)
    return BaselineEstimate(epsilon_hat=est.epsilon_hat, theta_hat=est.psi_hat)


def ambiguity_line(psi_hat: float, epsilon_hat: float, assumed_d: float) -> float:
    """Offset that reproduces ``psi_hat`` if the delay were ``assumed_d``."""
    if not epsilon_hat > -1.0:
        raise DomainError(f"epsilon_hat must be > -1, got {epsilon_hat!r}")
    return psi_hat - (1.0 + epsilon_hat) * assumed_d

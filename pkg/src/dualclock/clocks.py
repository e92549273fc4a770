"""Continuous clock models for a master clock and a pair of slave clocks.

All clocks are affine functions of an ideal reference time ``t``::

    T_m(t)  = f_m * t + theta_m
    T_s1(t) = SLAVE1_RATE_MULTIPLIER * f_s * t + theta_s1
    T_s2(t) = f_s * t + theta_s2

Rates are dimensionless (clock seconds per reference second). Slave clock 1
is driven at a fixed multiple of slave clock 2's rate; the multiple lives in
one constant so the hardware variant with another ratio is a one-line change.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError

SLAVE1_RATE_MULTIPLIER = 2.0


@dataclass(frozen=True)
class MasterClock:
    f_m: float = 1.0
    theta_m: float = 0.0

    def __post_init__(self) -> None:
        if not self.f_m > 0.0:
            raise DomainError(f"master rate f_m must be > 0, got {self.f_m!r}")


@dataclass(frozen=True)
class DualSlaveClock:
    """Two slave clocks sharing one driving signal of rate ``f_s``.

    ``theta_s1`` and ``theta_s2`` are independent so that both a simultaneous
    start (``theta_s1 == 2 * theta_s2``) and a known inter-slave offset can
    be expressed.
    """

    f_s: float = 1.0
    theta_s1: float = 0.0
    theta_s2: float = 0.0

    def __post_init__(self) -> None:
        if not self.f_s > 0.0:
            raise DomainError(f"slave rate f_s must be > 0, got {self.f_s!r}")


@dataclass(frozen=True)
class DerivedClockParams:
    """Skew and slave phases re-expressed against the master clock."""

    epsilon: float
    theta_tilde_s1: float
    theta_tilde_s2: float


def read_master(clock: MasterClock, t):
    """Master clock reading at reference time ``t`` (scalar or array)."""
    return clock.f_m * t + clock.theta_m


def read_slaves(clock: DualSlaveClock, t):
    """Return ``(T_s1, T_s2)`` at reference time ``t`` (scalar or array)."""
    return (
        SLAVE1_RATE_MULTIPLIER * clock.f_s * t + clock.theta_s1,
        clock.f_s * t + clock.theta_s2,
    )


def normalized_skew(f_m: float, f_s: float) -> float:
    if not f_m > 0.0:
        raise DomainError(f"f_m must be > 0, got {f_m!r}")
    return (f_s - f_m) / f_m


def effective_phases(master: MasterClock, slave: DualSlaveClock) -> DerivedClockParams:
    eps = normalized_skew(master.f_m, slave.f_s)
    return DerivedClockParams(
        epsilon=eps,
        theta_tilde_s1=slave.theta_s1 - SLAVE1_RATE_MULTIPLIER * (1.0 + eps) * master.theta_m,
        theta_tilde_s2=slave.theta_s2 - (1.0 + eps) * master.theta_m,
    )


def slaves_from_master(master: MasterClock, slave: DualSlaveClock, t_m):
    """Slave readings expressed as functions of the master reading ``t_m``.

    Equivalent to ``read_slaves(slave, t)`` at the reference instant where
    ``read_master(master, t) == t_m``.
    """
    p = effective_phases(master, slave)
    one_plus_eps = 1.0 + p.epsilon
    return (
        SLAVE1_RATE_MULTIPLIER * one_plus_eps * t_m + p.theta_tilde_s1,
        one_plus_eps * t_m + p.theta_tilde_s2,
    )


def common_offset_residual(master: MasterClock, slave: DualSlaveClock) -> float:
    """``theta_s1 - theta_s2 - (1 + eps) * theta_m``.

    Zero exactly when both slave clocks carry the same offset against the
    master clock, i.e. when the two effective phases coincide.
    """
    eps = normalized_skew(master.f_m, slave.f_s)
    return (
        slave.theta_s1
        - slave.theta_s2
        - (SLAVE1_RATE_MULTIPLIER - 1.0) * (1.0 + eps) * master.theta_m
    )


def simultaneous_start(f_s: float, theta_s2: float) -> DualSlaveClock:
    """Slave pair started (or reset) at the same instant: phases in ratio 2."""
    return DualSlaveClock(
        f_s=f_s,
        theta_s1=SLAVE1_RATE_MULTIPLIER * theta_s2,
        theta_s2=theta_s2,
    )

"""One-way Sync message simulation.

Two generators are provided:

* :func:`generate_corrected` runs the physical clocks. Each Sync leaves the
  master at ``T_m.i``, arrives after a fixed delay in reference time and is
  stamped by both slave clocks.
* :func:`generate_chin_chen` evaluates the original dual-clock equations
  directly, where one common offset ``theta`` is added once to each slave
  clock. That model is physically inconsistent; it exists so estimators can
  be checked against data from their own generating model.

Jitter is zero-mean Gaussian drawn from a PCG64 stream
(``numpy.random.Generator(PCG64(seed))``; normal variates via numpy's
ziggurat method). Slave-1 jitter for all messages is drawn first, then
slave-2 jitter.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .clocks import (
    SLAVE1_RATE_MULTIPLIER,
    DualSlaveClock,
    MasterClock,
    effective_phases,
    read_slaves,
)
from .errors import DomainError

CSV_FIELDS = ("i", "t_m", "t_s1", "t_s2")
TRUTH_FIELD = "t_ref_arrival"
_UINT64_MAX = 2**64 - 1


@dataclass(frozen=True)
class PathModel:
    d_m2s: float = 0.0

    def __post_init__(self) -> None:
        if not self.d_m2s >= 0.0:
            raise DomainError(f"d_m2s must be >= 0, got {self.d_m2s!r}")


@dataclass(frozen=True)
class JitterModel:
    sigma1: float = 0.0
    sigma2: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("sigma1", "sigma2"):
            value = getattr(self, name)
            if not value >= 0.0:
                raise DomainError(f"{name} must be >= 0, got {value!r}")
        if not 0 <= int(self.seed) <= _UINT64_MAX:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")


@dataclass(frozen=True)
class SyncSchedule:
    """Uniform Sync departures in master time, ``T_m.i = t_m_start + (i-1)*interval``."""

    n: int = 100
    t_m_start: float = 0.0
    interval: float = 1.0

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        if not self.interval > 0.0:
            raise DomainError(f"interval must be > 0, got {self.interval!r}")

    def departures(self) -> np.ndarray:
        return self.t_m_start + np.arange(int(self.n), dtype=float) * self.interval


@dataclass(frozen=True)
class ClockScenario:
    master: MasterClock = field(default_factory=MasterClock)
    slave: DualSlaveClock = field(default_factory=DualSlaveClock)
    path: PathModel = field(default_factory=PathModel)
    jitter: JitterModel = field(default_factory=JitterModel)
    schedule: SyncSchedule = field(default_factory=SyncSchedule)


@dataclass(frozen=True)
class SyncRecord:
    """One received Sync message.

    ``t_arrival`` is the reference-time arrival instant, kept as ground-truth
    metadata. Estimators read only ``i``, ``t_m_i``, ``t_s1_i`` and ``t_s2_i``.
    """

    i: int
    t_m_i: float
    t_s1_i: float
    t_s2_i: float
    t_arrival: float = float("nan")


@dataclass(frozen=True)
class GroundTruth:
    epsilon: float
    d_master: float
    theta_common: float
    psi: float


def ground_truth(scenario: ClockScenario) -> GroundTruth:
    """True skew, delay in master units, common offset and combined intercept."""
    p = effective_phases(scenario.master, scenario.slave)
    d_master = scenario.master.f_m * scenario.path.d_m2s
    theta = p.theta_tilde_s2
    return GroundTruth(
        epsilon=p.epsilon,
        d_master=d_master,
        theta_common=theta,
        psi=(1.0 + p.epsilon) * d_master + theta,
    )


def _check(scenario: ClockScenario) -> None:
    if not isinstance(scenario, ClockScenario):
        raise DomainError(f"expected a ClockScenario, got {type(scenario).__name__}")


def _jitter(scenario: ClockScenario) -> tuple[np.ndarray, np.ndarray]:
    n = int(scenario.schedule.n)
    j = scenario.jitter
    rng = np.random.Generator(np.random.PCG64(int(j.seed)))
    phi1 = rng.normal(0.0, j.sigma1, n) if j.sigma1 > 0.0 else np.zeros(n)
    phi2 = rng.normal(0.0, j.sigma2, n) if j.sigma2 > 0.0 else np.zeros(n)
    return phi1, phi2


def _arrivals(scenario: ClockScenario, t_m: np.ndarray) -> np.ndarray:
    m = scenario.master
    return (t_m - m.theta_m) / m.f_m + scenario.path.d_m2s


def _pack(t_m, t_s1, t_s2, t_ref) -> list[SyncRecord]:
    return [
        SyncRecord(i=k + 1, t_m_i=a, t_s1_i=b, t_s2_i=c, t_arrival=d)
        for k, (a, b, c, d) in enumerate(
            zip(t_m.tolist(), t_s1.tolist(), t_s2.tolist(), t_ref.tolist())
        )
    ]


def generate_corrected(scenario: ClockScenario, *, frame: str = "reference") -> list[SyncRecord]:
    """Simulate reception of ``n`` Sync messages by the physical slave clocks.

    With ``frame="reference"`` (default) each departure is mapped to its
    reference arrival instant and both slave clocks are read there. With
    ``frame="master"`` the same readings are evaluated directly in master
    time as ``k*(1+eps)*T_m + intercept_k``; two scenarios that share
    ``eps`` and the combined intercept then yield bitwise-identical
    timestamps.
    """
    _check(scenario)
    t_m = scenario.schedule.departures()
    t_ref = _arrivals(scenario, t_m)
    phi1, phi2 = _jitter(scenario)
    if frame == "reference":
        t_s1, t_s2 = read_slaves(scenario.slave, t_ref)
    elif frame == "master":
        p = effective_phases(scenario.master, scenario.slave)
        gt = ground_truth(scenario)
        one_plus_eps = 1.0 + p.epsilon
        icpt1 = SLAVE1_RATE_MULTIPLIER * one_plus_eps * gt.d_master + p.theta_tilde_s1
        t_s1 = SLAVE1_RATE_MULTIPLIER * one_plus_eps * t_m + icpt1
        t_s2 = one_plus_eps * t_m + gt.psi
    else:
        raise DomainError(f"frame must be 'reference' or 'master', got {frame!r}")
    return _pack(t_m, t_s1 + phi1, t_s2 + phi2, t_ref)


def generate_chin_chen(scenario: ClockScenario, theta: float) -> list[SyncRecord]:
    """Simulate the original dual-clock equations with common offset ``theta``.

    ``T_s1.i = 2(1+eps)(T_m.i + D) + theta``, ``T_s2.i = (1+eps)(T_m.i + D) + theta``
    (plus jitter), with eps and D taken from the scenario's ground truth.
    The scenario's slave phases are ignored.
    """
    _check(scenario)
    gt = ground_truth(scenario)
    t_m = scenario.schedule.departures()
    t_ref = _arrivals(scenario, t_m)
    phi1, phi2 = _jitter(scenario)
    base = (1.0 + gt.epsilon) * (t_m + gt.d_master)
    t_s1 = SLAVE1_RATE_MULTIPLIER * base + theta + phi1
    t_s2 = base + theta + phi2
    return _pack(t_m, t_s1, t_s2, t_ref)


def as_arrays(records: Sequence[SyncRecord]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Observable columns ``(t_m, t_s1, t_s2)`` as float arrays."""
    t_m = np.fromiter((r.t_m_i for r in records), dtype=float, count=len(records))
    t_s1 = np.fromiter((r.t_s1_i for r in records), dtype=float, count=len(records))
    t_s2 = np.fromiter((r.t_s2_i for r in records), dtype=float, count=len(records))
    return t_m, t_s1, t_s2


# -- CSV dataset interchange -------------------------------------------------

def _fmt(x: float) -> str:
    return format(x, ".17g")


def dumps_csv(records: Iterable[SyncRecord], with_truth: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS + ((TRUTH_FIELD,) if with_truth else ()))
    for r in records:
        row = [str(r.i), _fmt(r.t_m_i), _fmt(r.t_s1_i), _fmt(r.t_s2_i)]
        if with_truth:
            row.append(_fmt(r.t_arrival))
        w.writerow(row)
    return buf.getvalue()


def loads_csv(text: str) -> list[SyncRecord]:
    reader = csv.DictReader(io.StringIO(text))
    missing = set(CSV_FIELDS) - set(reader.fieldnames or ())
    if missing:
        raise DomainError(f"dataset CSV is missing columns: {sorted(missing)}")
    out = []
    for row in reader:
        out.append(
            SyncRecord(
                i=int(row["i"]),
                t_m_i=float(row["t_m"]),
                t_s1_i=float(row["t_s1"]),
                t_s2_i=float(row["t_s2"]),
                t_arrival=float(row[TRUTH_FIELD]) if row.get(TRUTH_FIELD) else float("nan"),
            )
        )
    return out


def write_csv(path: str | os.PathLike, records: Iterable[SyncRecord], with_truth: bool = False) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dumps_csv(records, with_truth=with_truth))


def read_csv(path: str | os.PathLike) -> list[SyncRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        return loads_csv(fh.read())

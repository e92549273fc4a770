"""Scenario configuration, the bias demonstration and Monte-Carlo sweeps.

Per-trial seeds in a sweep are derived from the base seed with numpy's
``SeedSequence`` stream splitting: trial ``k`` uses the first 64-bit word of
``SeedSequence(seed, spawn_key=(k,)).generate_state(1, uint64)``. This is the
same child that ``SeedSequence(seed).spawn(M)[k]`` would produce, so any
trial can be replayed alone.
"""

from __future__ import annotations

import dataclasses
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

import numpy as np

from .clocks import DualSlaveClock, MasterClock, effective_phases, simultaneous_start
from .errors import ConfigError, DualClockError, TrialError
from .estimators import estimate_baseline, estimate_chin_chen, estimate_corrected
from .identifiability import build_design_matrix, rank_analysis
from .protocol import (
    ClockScenario,
    GroundTruth,
    JitterModel,
    PathModel,
    SyncRecord,
    SyncSchedule,
    generate_chin_chen,
    generate_corrected,
    ground_truth,
)

GENERATORS = ("corrected", "chin_chen")
_FLOAT_FIELDS = (
    "f_m", "theta_m", "f_s", "theta_s1", "theta_s2", "d_m2s",
    "sigma1", "sigma2", "t_m_start", "interval", "chin_chen_theta",
)


@dataclass(frozen=True)
class ScenarioConfig:
    """Flat scenario description, as read from the ``scenario`` JSON object.

    Exactly one of ``theta_s1`` and ``simultaneous_start=True`` must be given.
    """

    f_m: float = 1.0
    theta_m: float = 0.0
    f_s: float = 1.0
    theta_s1: float | None = None
    simultaneous_start: bool = False
    theta_s2: float = 0.0
    d_m2s: float = 0.0
    sigma1: float = 0.0
    sigma2: float = 0.0
    seed: int = 0
    n: int = 100
    t_m_start: float = 0.0
    interval: float = 1.0
    generator: str = "corrected"
    chin_chen_theta: float = 0.0
    pooling: bool = False

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        for name in _FLOAT_FIELDS:
            v = getattr(self, name)
            if v is None and name == "theta_s1":
                continue
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(name, f"must be a finite number, got {v!r}")
        for name in ("n", "seed"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise ConfigError(name, f"must be an integer, got {v!r}")
        for name in ("simultaneous_start", "pooling"):
            if not isinstance(getattr(self, name), bool):
                raise ConfigError(name, "must be true or false")
        if self.f_m <= 0:
            raise ConfigError("f_m", "must be > 0")
        if self.f_s <= 0:
            raise ConfigError("f_s", "must be > 0")
        if self.n < 1:
            raise ConfigError("n", "must be >= 1")
        if self.interval <= 0:
            raise ConfigError("interval", "must be > 0")
        if self.d_m2s < 0:
            raise ConfigError("d_m2s", "must be >= 0")
        for name in ("sigma1", "sigma2"):
            if getattr(self, name) < 0:
                raise ConfigError(name, "must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed", "must be an unsigned 64-bit integer")
        if self.simultaneous_start and self.theta_s1 is not None:
            raise ConfigError("theta_s1", "give either theta_s1 or simultaneous_start, not both")
        if not self.simultaneous_start and self.theta_s1 is None:
            raise ConfigError("theta_s1", "one of theta_s1 or simultaneous_start is required")
        if self.generator not in GENERATORS:
            raise ConfigError("generator", f"must be one of {GENERATORS}, got {self.generator!r}")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ScenarioConfig":
        if "scenario" in data:
            extra = set(data) - {"scenario"}
            if extra:
                raise ConfigError(sorted(extra)[0], "unknown top-level key")
            data = data["scenario"]
        if not isinstance(data, Mapping):
            raise ConfigError("scenario", "must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(key, "unknown field")
        return cls(**dict(data))

    @classmethod
    def from_json(cls, text: str) -> "ScenarioConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config", "must be a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def with_overrides(self, **changes: Any) -> "ScenarioConfig":
        known = {f.name for f in dataclasses.fields(self)}
        for key in changes:
            if key not in known:
                raise ConfigError(key, "unknown field")
        return dataclasses.replace(self, **changes)

    def to_scenario(self) -> ClockScenario:
        if self.simultaneous_start:
            slave = simultaneous_start(self.f_s, self.theta_s2)
        else:
            slave = DualSlaveClock(f_s=self.f_s, theta_s1=self.theta_s1, theta_s2=self.theta_s2)
        return ClockScenario(
            master=MasterClock(f_m=self.f_m, theta_m=self.theta_m),
            slave=slave,
            path=PathModel(d_m2s=self.d_m2s),
            jitter=JitterModel(sigma1=self.sigma1, sigma2=self.sigma2, seed=self.seed),
            schedule=SyncSchedule(n=self.n, t_m_start=self.t_m_start, interval=self.interval),
        )


DEMO_CONFIG = ScenarioConfig(
    f_m=1.0,
    theta_m=0.0,
    f_s=1.0001,
    simultaneous_start=True,
    theta_s2=0.003,
    d_m2s=0.002,
    n=100,
)


def generate(config: ScenarioConfig) -> list[SyncRecord]:
    scenario = config.to_scenario()
    if config.generator == "chin_chen":
        return generate_chin_chen(scenario, config.chin_chen_theta)
    return generate_corrected(scenario)


def truth_for(config: ScenarioConfig) -> GroundTruth:
    gt = ground_truth(config.to_scenario())
    if config.generator == "chin_chen":
        theta = config.chin_chen_theta
        gt = GroundTruth(gt.epsilon, gt.d_master, theta, (1.0 + gt.epsilon) * gt.d_master + theta)
    return gt


def predicted_chin_chen_bias(config: ScenarioConfig) -> tuple[float, float]:
    """Closed-form ``(offset bias, delay bias)`` of the dual-clock estimator.

    Physical clocks give ``theta_hat = 2*th2 - th1`` and
    ``D_hat = D + (th1 - th2)/(1+eps)`` with ``th1``, ``th2`` the effective
    slave phases. With a simultaneous start that is ``-theta`` and
    ``theta/(1+eps)``. Data from the estimator's own model carry no bias.
    """
    if config.generator == "chin_chen":
        return 0.0, 0.0
    sc = config.to_scenario()
    p = effective_phases(sc.master, sc.slave)
    d1 = p.theta_tilde_s1 - p.theta_tilde_s2
    return -d1, d1 / (1.0 + p.epsilon)


def _truth_dict(gt: GroundTruth) -> dict:
    return {"epsilon": gt.epsilon, "d_m2s": gt.d_master, "theta": gt.theta_common, "psi": gt.psi}


@dataclass(frozen=True)
class EstimateReport:
    scenario: dict | None
    ground_truth: dict | None
    estimates: dict
    bias: dict | None
    identifiability: dict

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return dumps_json(self.to_dict())


def dumps_json(payload: Any) -> str:
    return json.dumps(_plain(payload), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _plain(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def estimate_report(records: Sequence[SyncRecord], config: ScenarioConfig | None = None) -> EstimateReport:
    """Run all estimators and the rank analysis on ``records``.

    Truth and bias sections are filled only when the generating ``config`` is
    known.
    """
    pooling = config.pooling if config is not None else False
    cc = estimate_chin_chen(records)
    co = estimate_corrected(records, pooling=pooling)
    bl = estimate_baseline(records)
    estimates = {
        "chin_chen": {"epsilon": cc.epsilon_hat, "d_m2s": cc.d_hat, "theta": cc.theta_hat, "residual_var": cc.residual_var},
        "corrected": {"epsilon": co.epsilon_hat, "psi": co.psi_hat, "residual_var": co.residual_var},
        "baseline": {"epsilon": bl.epsilon_hat, "theta": bl.theta_hat},
    }
    lin = (co.epsilon_hat, cc.d_hat, cc.theta_hat)
    identifiability = {
        model + "_model": rank_analysis(
            build_design_matrix(records, lin, use_both_equations=True, model=model, center=True)
        ).to_dict()
        for model in ("corrected", "chin_chen")
    }
    truth = bias = None
    if config is not None:
        gt = truth_for(config)
        truth = _truth_dict(gt)
        theta_bias, d_bias = predicted_chin_chen_bias(config)
        bias = {
            "chin_chen_theta": cc.theta_hat - gt.theta_common,
            "chin_chen_d_m2s": cc.d_hat - gt.d_master,
            "chin_chen_epsilon": cc.epsilon_hat - gt.epsilon,
            "predicted_chin_chen_theta": theta_bias,
            "predicted_chin_chen_d_m2s": d_bias,
            "corrected_psi": co.psi_hat - gt.psi,
            "corrected_epsilon": co.epsilon_hat - gt.epsilon,
            "baseline_theta": bl.theta_hat - gt.theta_common,
        }
    return EstimateReport(
        scenario=config.to_dict() if config is not None else None,
        ground_truth=truth,
        estimates=estimates,
        bias=bias,
        identifiability=identifiability,
    )


def run_demo(config: ScenarioConfig = DEMO_CONFIG) -> EstimateReport:
    return estimate_report(generate(config), config)


def summarize(report: EstimateReport) -> str:
    """Human-readable digest of a demo report."""
    e = report.estimates
    lines = [
        "Dual slave clock one-way synchronization",
        f"  chin_chen: epsilon={e['chin_chen']['epsilon']:.6g} d_m2s={e['chin_chen']['d_m2s']:.9g} theta={e['chin_chen']['theta']:.3g}",
        f"  corrected: epsilon={e['corrected']['epsilon']:.6g} psi={e['corrected']['psi']:.9g}",
        f"  baseline:  epsilon={e['baseline']['epsilon']:.6g} theta={e['baseline']['theta']:.9g}",
    ]
    if report.ground_truth is not None:
        g, b = report.ground_truth, report.bias
        lines += [
            f"  truth:     epsilon={g['epsilon']:.6g} d_m2s={g['d_m2s']:.9g} theta={g['theta']:.9g} psi={g['psi']:.9g}",
            f"  offset estimate error {b['chin_chen_theta']:.6g} (predicted {b['predicted_chin_chen_theta']:.6g})",
            f"  delay estimate error  {b['chin_chen_d_m2s']:.9g} (predicted {b['predicted_chin_chen_d_m2s']:.9g})",
        ]
    ident = report.identifiability
    lines.append(
        f"  design rank: corrected model {ident['corrected_model']['numerical_rank']}, "
        f"dual-clock model {ident['chin_chen_model']['numerical_rank']}"
    )
    return "\n".join(lines) + "\n"


# -- Monte-Carlo sweep -------------------------------------------------------

_SWEEP_PARAMS = (
    ("chin_chen", "epsilon"), ("chin_chen", "d_m2s"), ("chin_chen", "theta"),
    ("corrected", "epsilon"), ("corrected", "psi"),
    ("baseline", "epsilon"), ("baseline", "theta"),
)


def trial_seed(base_seed: int, trial: int) -> int:
    ss = np.random.SeedSequence(base_seed, spawn_key=(trial,))
    return int(ss.generate_state(1, np.uint64)[0])


def _run_trial(args: tuple[ScenarioConfig, int]) -> list[float]:
    config, k = args
    try:
        cfg = config.with_overrides(seed=trial_seed(config.seed, k))
        records = generate(cfg)
        cc = estimate_chin_chen(records)
        co = estimate_corrected(records, pooling=cfg.pooling)
        bl = estimate_baseline(records)
    except DualClockError as exc:
        raise TrialError(k, exc) from exc
    return [cc.epsilon_hat, cc.d_hat, cc.theta_hat, co.epsilon_hat, co.psi_hat, bl.epsilon_hat, bl.theta_hat]


@dataclass(frozen=True)
class SweepReport:
    trials: int
    scenario: dict
    mean: dict
    std: dict
    ground_truth: dict
    predicted: dict

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return dumps_json(self.to_dict())


def run_sweep(
    config: ScenarioConfig,
    trials: int,
    overrides: Sequence[Mapping[str, Any]] = (),
    workers: int = 1,
) -> SweepReport:
    """Run ``trials`` independent noisy trials and aggregate the estimates.

    ``overrides`` are field updates applied to ``config`` in order before
    the sweep. Trials run in a process pool when ``workers > 1``; results
    are folded in trial order either way.
    """
    if int(trials) != trials or trials < 1:
        raise ConfigError("trials", "must be a positive integer")
    for ov in overrides:
        config = config.with_overrides(**dict(ov))
    jobs = [(config, k) for k in range(int(trials))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_trial, jobs))
    else:
        rows = [_run_trial(job) for job in jobs]
    data = np.array(rows)
    mean = data.mean(axis=0)
    std = data.std(axis=0, ddof=1) if trials > 1 else np.zeros(data.shape[1])
    mean_d: dict = {}
    std_d: dict = {}
    for (est, par), m, s in zip(_SWEEP_PARAMS, mean.tolist(), std.tolist()):
        mean_d.setdefault(est, {})[par] = m
        std_d.setdefault(est, {})[par] = s
    gt = truth_for(config)
    theta_bias, d_bias = predicted_chin_chen_bias(config)
    predicted = {
        "chin_chen": {
            "epsilon": gt.epsilon,
            "d_m2s": gt.d_master + d_bias,
            "theta": gt.theta_common + theta_bias,
        },
        "corrected": {"epsilon": gt.epsilon, "psi": gt.psi},
        "baseline": {"epsilon": gt.epsilon, "theta": gt.psi},
    }
    return SweepReport(
        trials=int(trials),
        scenario=config.to_dict(),
        mean=mean_d,
        std=std_d,
        ground_truth=_truth_dict(gt),
        predicted=predicted,
    )

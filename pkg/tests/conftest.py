from __future__ import annotations

import numpy as np
import pytest

from dualclock import (
    ClockScenario,
    DualSlaveClock,
    JitterModel,
    MasterClock,
    PathModel,
    SyncSchedule,
    simultaneous_start,
)


def make_scenario(
    f_m=1.0,
    theta_m=0.0,
    f_s=1.0,
    theta_s2=0.0,
    theta_s1=None,
    d_m2s=0.0,
    sigma1=0.0,
    sigma2=0.0,
    seed=0,
    n=10,
    t_m_start=0.0,
    interval=1.0,
):
    """Scenario with a simultaneous start unless ``theta_s1`` is given."""
    if theta_s1 is None:
        slave = simultaneous_start(f_s, theta_s2)
    else:
        slave = DualSlaveClock(f_s=f_s, theta_s1=theta_s1, theta_s2=theta_s2)
    return ClockScenario(
        master=MasterClock(f_m=f_m, theta_m=theta_m),
        slave=slave,
        path=PathModel(d_m2s=d_m2s),
        jitter=JitterModel(sigma1=sigma1, sigma2=sigma2, seed=seed),
        schedule=SyncSchedule(n=n, t_m_start=t_m_start, interval=interval),
    )


def random_scenario(rng: np.random.Generator, n=10, **kw):
    """Simultaneous-start scenario with theta in +-10 ms, D in [0, 10 ms], eps in +-1e-3."""
    eps = rng.uniform(-1e-3, 1e-3)
    theta = rng.uniform(-0.01, 0.01)
    d = rng.uniform(0.0, 0.01)
    f_m = rng.uniform(0.5, 2.0)
    theta_m = rng.uniform(-1.0, 1.0)
    f_s = f_m * (1.0 + eps)
    # theta_tilde_s2 = theta_s2 - (1+eps) theta_m
    theta_s2 = theta + (1.0 + eps) * theta_m
    return make_scenario(f_m=f_m, theta_m=theta_m, f_s=f_s, theta_s2=theta_s2, d_m2s=d / f_m, n=n, **kw)


@pytest.fixture
def demo_scenario():
    return make_scenario(f_s=1.0001, theta_s2=0.003, d_m2s=0.002, n=100)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(results):
        ok, detail = results[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")

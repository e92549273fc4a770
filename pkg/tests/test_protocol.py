from __future__ import annotations

import math

import numpy as np
import pytest

from dualclock import DomainError, JitterModel, PathModel, SyncSchedule, ground_truth
from dualclock.protocol import (
    as_arrays,
    dumps_csv,
    generate_chin_chen,
    generate_corrected,
    loads_csv,
    read_csv,
    write_csv,
)

from conftest import make_scenario, random_scenario


def test_identity_clocks_zero_delay():
    recs = generate_corrected(make_scenario(n=3))
    assert [(r.t_s1_i, r.t_s2_i) for r in recs] == [(0.0, 0.0), (2.0, 1.0), (4.0, 2.0)]
    assert [r.i for r in recs] == [1, 2, 3]
    assert [r.t_m_i for r in recs] == [0.0, 1.0, 2.0]


def test_first_record_hand_evaluation():
    sc = make_scenario(f_s=1.0001, theta_s2=0.003, d_m2s=0.002, n=3)
    r = generate_corrected(sc)[0]
    # reference arrival t = 0.002; T_s2 = 1.0001*0.002 + 0.003
    assert r.t_arrival == 0.002
    assert r.t_s2_i == pytest.approx(0.0050002, rel=1e-14)
    assert r.t_s1_i == pytest.approx(0.0100004, rel=1e-14)


def test_noiseless_simultaneous_start_doubles():
    rng = np.random.default_rng(7)
    for _ in range(20):
        recs = generate_corrected(random_scenario(rng, n=25))
        assert all(r.t_s1_i == 2.0 * r.t_s2_i for r in recs)


def test_chin_chen_examples():
    sc = make_scenario(t_m_start=1.0, n=2)
    r = generate_chin_chen(sc, 0.5)[0]
    assert (r.t_s1_i, r.t_s2_i) == (2.5, 1.5)

    sc = make_scenario(f_s=1.0001, d_m2s=0.002, n=2)
    r = generate_chin_chen(sc, 0.003)[0]
    assert r.t_s2_i == pytest.approx(0.0050002, rel=1e-14)
    assert r.t_s1_i == pytest.approx(0.0070004, rel=1e-14)
    assert r.t_s1_i != pytest.approx(2.0 * r.t_s2_i)


def test_models_coincide_at_zero_offset():
    rng = np.random.default_rng(11)
    for _ in range(10):
        eps = rng.uniform(-1e-3, 1e-3)
        theta_m = rng.uniform(-1, 1)
        # theta_tilde_s2 = 0 requires theta_s2 = (1+eps)*theta_m
        sc = make_scenario(f_s=1.0 + eps, theta_m=theta_m, theta_s2=(1.0 + eps) * theta_m,
                           d_m2s=rng.uniform(0, 0.01), n=20)
        a = generate_corrected(sc)
        b = generate_chin_chen(sc, 0.0)
        for ra, rb in zip(a, b):
            assert ra.t_m_i == rb.t_m_i
            assert math.isclose(ra.t_s1_i, rb.t_s1_i, rel_tol=1e-12, abs_tol=1e-14)
            assert math.isclose(ra.t_s2_i, rb.t_s2_i, rel_tol=1e-12, abs_tol=1e-14)


def test_model_divergence_is_theta_in_slave1():
    rng = np.random.default_rng(3)
    for _ in range(10):
        sc = random_scenario(rng)
        gt = ground_truth(sc)
        a = generate_corrected(sc)
        b = generate_chin_chen(sc, gt.theta_common)
        for ra, rb in zip(a, b):
            assert math.isclose(ra.t_s1_i - rb.t_s1_i, gt.theta_common, abs_tol=1e-12)
            assert math.isclose(ra.t_s2_i, rb.t_s2_i, abs_tol=1e-12)


def test_master_frame_agrees_with_reference_frame():
    rng = np.random.default_rng(5)
    for _ in range(10):
        sc = random_scenario(rng, n=30)
        for ra, rb in zip(generate_corrected(sc), generate_corrected(sc, frame="master")):
            assert math.isclose(ra.t_s1_i, rb.t_s1_i, rel_tol=1e-12, abs_tol=1e-13)
            assert math.isclose(ra.t_s2_i, rb.t_s2_i, rel_tol=1e-12, abs_tol=1e-13)
    with pytest.raises(DomainError):
        generate_corrected(make_scenario(), frame="bogus")


def test_ground_truth_examples():
    gt = ground_truth(make_scenario(f_s=1.0001, theta_s2=0.003, d_m2s=0.002))
    assert gt.epsilon == pytest.approx(1e-4, rel=1e-12)
    assert gt.d_master == 0.002
    assert gt.theta_common == 0.003
    assert gt.psi == pytest.approx(0.0050002, rel=1e-13)
    # cross-check against the noiseless intercept of the generated data
    assert generate_corrected(make_scenario(f_s=1.0001, theta_s2=0.003, d_m2s=0.002))[0].t_s2_i == pytest.approx(gt.psi, rel=1e-14)

    gt = ground_truth(make_scenario())
    assert (gt.epsilon, gt.d_master, gt.theta_common, gt.psi) == (0.0, 0.0, 0.0, 0.0)

    gt = ground_truth(make_scenario(theta_m=1.0, theta_s2=3.0))
    assert (gt.theta_common, gt.psi) == (2.0, 2.0)


def test_ground_truth_delay_in_master_units():
    gt = ground_truth(make_scenario(f_m=2.0, f_s=2.0, d_m2s=0.001))
    assert gt.d_master == 0.002


def test_determinism_bitwise():
    sc = make_scenario(f_s=1.0001, theta_s2=0.003, d_m2s=0.002, sigma1=1e-6, sigma2=2e-6, seed=42, n=50)
    assert generate_corrected(sc) == generate_corrected(sc)
    assert generate_chin_chen(sc, 0.003) == generate_chin_chen(sc, 0.003)
    other = make_scenario(f_s=1.0001, theta_s2=0.003, d_m2s=0.002, sigma1=1e-6, sigma2=2e-6, seed=43, n=50)
    assert generate_corrected(sc) != generate_corrected(other)


def test_jitter_mean_within_four_sigma():
    sigma, n = 1e-6, 10_000
    noisy = make_scenario(f_s=1.0001, theta_s2=0.003, d_m2s=0.002, sigma1=sigma, sigma2=sigma, seed=2024, n=n)
    clean = make_scenario(f_s=1.0001, theta_s2=0.003, d_m2s=0.002, n=n)
    _, s1, s2 = as_arrays(generate_corrected(noisy))
    _, c1, c2 = as_arrays(generate_corrected(clean))
    bound = 4.0 * sigma / math.sqrt(n)
    assert abs(np.mean(s1 - c1)) < bound
    assert abs(np.mean(s2 - c2)) < bound
    assert np.std(s2 - c2) == pytest.approx(sigma, rel=0.05)
    # independence between the two clocks
    assert abs(np.corrcoef(s1 - c1, s2 - c2)[0, 1]) < 4.0 / math.sqrt(n)


def test_ordering():
    recs = generate_corrected(make_scenario(f_m=1.5, theta_m=0.2, d_m2s=0.01, n=50, interval=0.125))
    assert all(b.t_m_i > a.t_m_i for a, b in zip(recs, recs[1:]))
    assert all(b.t_arrival > a.t_arrival for a, b in zip(recs, recs[1:]))


@pytest.mark.parametrize(
    "factory",
    [
        lambda: PathModel(d_m2s=-1e-3),
        lambda: JitterModel(sigma1=-1.0),
        lambda: JitterModel(seed=-1),
        lambda: JitterModel(seed=2**64),
        lambda: SyncSchedule(n=0),
        lambda: SyncSchedule(interval=0.0),
    ],
)
def test_invalid_components(factory):
    with pytest.raises(DomainError):
        factory()


def test_invalid_scenario_type():
    with pytest.raises(DomainError):
        generate_corrected(object())
    with pytest.raises(DomainError):
        generate_chin_chen("nope", 0.0)


def test_csv_round_trip_bit_exact(tmp_path):
    sc = make_scenario(f_s=1.0001, theta_s2=0.003, d_m2s=0.002, sigma1=1e-6, sigma2=1e-6, seed=9,
                       n=200, t_m_start=1.0e6, interval=0.0625)
    recs = generate_corrected(sc)
    path = tmp_path / "d.csv"
    write_csv(path, recs, with_truth=True)
    back = read_csv(path)
    assert back == recs
    text = dumps_csv(recs)
    assert text.splitlines()[0] == "i,t_m,t_s1,t_s2"
    assert "\r" not in text
    plain = loads_csv(text)
    assert [(r.i, r.t_m_i, r.t_s1_i, r.t_s2_i) for r in plain] == [(r.i, r.t_m_i, r.t_s1_i, r.t_s2_i) for r in recs]
    assert all(math.isnan(r.t_arrival) for r in plain)
    assert dumps_csv(recs, with_truth=True).splitlines()[0] == "i,t_m,t_s1,t_s2,t_ref_arrival"


def test_csv_missing_columns():
    with pytest.raises(DomainError):
        loads_csv("i,t_m,t_s1\n1,0,0\n")

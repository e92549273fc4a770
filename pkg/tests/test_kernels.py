from __future__ import annotations

import numpy as np
import pytest

from dualclock import RankError, _core, _kernels_py

try:
    from dualclock import _kernels as _kernels_cy
except ImportError:  # extension not built
    _kernels_cy = None

BACKENDS = [pytest.param(_kernels_py, id="python")]
if _kernels_cy is not None:
    BACKENDS.append(pytest.param(_kernels_cy, id="cython"))


def _f(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def _ols_oracle(x, y):
    a = np.column_stack((x, np.ones_like(x)))
    (slope, icpt), *_ = np.linalg.lstsq(a, y, rcond=None)
    return slope, icpt


@pytest.mark.parametrize("impl", BACKENDS)
def test_ols_matches_lstsq(impl):
    rng = np.random.default_rng(0)
    x = np.sort(rng.uniform(0, 100, 50))
    y = 1.0001 * x + 0.005 + rng.normal(0, 1e-6, 50)
    slope, icpt, mse = impl.ols_centered(_f(x), _f(y))
    s_ref, i_ref = _ols_oracle(x, y)
    assert slope == pytest.approx(s_ref, rel=1e-12)
    assert icpt == pytest.approx(i_ref, rel=1e-9)
    r = y - (s_ref * x + i_ref)
    assert mse == pytest.approx(np.mean(r * r), rel=1e-6)


@pytest.mark.parametrize("impl", BACKENDS)
def test_ols_rank_guard(impl):
    with pytest.raises(RankError):
        impl.ols_centered(_f([1.0]), _f([2.0]))
    with pytest.raises(RankError):
        impl.ols_centered(_f([3.0, 3.0, 3.0]), _f([1.0, 2.0, 3.0]))


@pytest.mark.parametrize("impl", BACKENDS)
def test_ridge_matches_direct_evaluation(impl):
    rng = np.random.default_rng(1)
    x = np.arange(20, dtype=float)
    y = 1.0001 * (x + 0.002) + 0.003 + rng.normal(0, 1e-6, 20)
    dg = np.linspace(-0.01, 0.01, 7)
    tg = np.linspace(-0.01, 0.01, 5)
    out = impl.ridge_sse(_f(x), _f(y), _f(dg), _f(tg))
    assert out.shape == (7, 5)
    for j, d in enumerate(dg):
        for k, th in enumerate(tg):
            u, w = x + d, y - th
            a = np.dot(w, u) / np.dot(u, u)
            assert out[j, k] == pytest.approx(np.sum((w - a * u) ** 2), rel=1e-9, abs=1e-24)


@pytest.mark.parametrize("impl", BACKENDS)
def test_ridge_degenerate(impl):
    with pytest.raises(RankError):
        impl.ridge_sse(_f([0.0, 0.0]), _f([1.0, 1.0]), _f([0.0]), _f([0.0]))


@pytest.mark.skipif(_kernels_cy is None, reason="compiled kernels not built")
def test_backends_agree():
    rng = np.random.default_rng(2)
    x = 1e6 + np.arange(300, dtype=float) * 0.125
    y = 0.9999 * x + 0.004 + rng.normal(0, 1e-6, 300)
    a = _kernels_py.ols_centered(_f(x), _f(y))
    b = _kernels_cy.ols_centered(_f(x), _f(y))
    # intercepts at t ~ 1e6 s carry ~1e-10 s of unavoidable cancellation
    assert a[0] == pytest.approx(b[0], rel=1e-14)
    assert a[1] == pytest.approx(b[1], abs=1e-9)

    x = np.arange(300, dtype=float) * 0.125
    y = 0.9999 * x + 0.004 + rng.normal(0, 1e-6, 300)
    a = _kernels_py.ols_centered(_f(x), _f(y))
    b = _kernels_cy.ols_centered(_f(x), _f(y))
    assert np.allclose(a, b, rtol=1e-10, atol=1e-15)
    dg = np.linspace(-0.01, 0.01, 11)
    assert np.allclose(_kernels_py.ridge_sse(_f(x), _f(y), dg, dg), _kernels_cy.ridge_sse(_f(x), _f(y), dg, dg), rtol=1e-8)


def test_backend_name():
    assert _core.BACKEND in ("cython", "python")

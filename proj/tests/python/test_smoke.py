import math

import numpy as np
import pytest

import bayesmv


def test_coefficients_at_reference_point():
    p = bayesmv.ModelParams()
    assert bayesmv.alpha(0.0, p) == pytest.approx(-1.0 / 3.0, abs=1e-12)
    assert bayesmv.gamma(0.0, p) == pytest.approx(0.5 * math.log(0.75), abs=1e-12)
    assert bayesmv.eta(0.0, p) == pytest.approx(0.5 * (8 * math.log(1.5) - 3.5), abs=1e-9)
    assert bayesmv.posterior_variance(1.0, 1.0) == pytest.approx(0.5)


def test_policy_and_value():
    p = bayesmv.ModelParams(w=2.0)
    mean, var = bayesmv.optimal_policy(0.0, 1.0, 1.0, p)
    assert mean == pytest.approx(5.0 / 3.0, abs=1e-12)
    assert var > 0.0
    deterministic = bayesmv.ModelParams(tau=0.0, w=2.0)
    assert bayesmv.optimal_policy(0.0, 1.0, 1.0, deterministic)[1] == 0.0
    assert bayesmv.value(1.0, 0.0, 0.0, bayesmv.ModelParams()) == pytest.approx(1.0)


def test_invalid_parameters_raise():
    with pytest.raises(ValueError):
        bayesmv.ModelParams(sigma=0.0)
    with pytest.raises(ValueError):
        bayesmv.alpha(2.0, bayesmv.ModelParams())


def test_filter_paths_shape_and_terminal_variance():
    p = bayesmv.ModelParams()
    times, m, rho = bayesmv.simulate_filter_paths(p, rho=1.0, n_paths=5, n_steps=200, seed=1)
    assert times.shape == (201,)
    assert m.shape == (5, 201)
    assert np.all(m[:, 0] == 0.0)
    assert np.all(rho == 1.0)
    terminal = bayesmv.simulate_filter_terminal(p, None, 20000, 100, 3)
    assert terminal.var() == pytest.approx(0.5, rel=0.05)


def test_small_simulation_is_reproducible():
    p = bayesmv.ModelParams()
    a = bayesmv.simulate_controlled(p, n_paths=2000, n_steps=50, seed=7)
    b = bayesmv.simulate_controlled(p, n_paths=2000, n_steps=50, seed=7)
    assert np.array_equal(a["terminal_wealth"], b["terminal_wealth"])
    assert a["quarantined"] == 0
    closed = bayesmv.value(0.0, 0.0, 0.0, p)
    assert abs(a["objective"] - closed) < 5 * a["stderr"]


def test_verification_reports_pass():
    p = bayesmv.ModelParams()
    for report in bayesmv.riccati_residuals(p):
        assert report["passed"], report
    assert bayesmv.hjb_residual(p)["passed"]
    assert all(r["passed"] for r in bayesmv.conviction_check(p))

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from dfautomata.amari import (
    ConstantFieldConfig,
    SigmoidParams,
    activation,
    bistable_config,
    classify,
    find_fixed_points,
    finite_difference_slope,
    integrate,
)

# roots of u = 1/(1 + exp(-10 (u - 1/2))) from scipy's brentq (independent of the scan)
OUTER_LOW = 0.007188064182671619
OUTER_HIGH = 0.9928119358173284


def test_oracle_values_are_roots():
    f = lambda u: 1 / (1 + math.exp(-10 * (u - 0.5)))  # noqa: E731
    assert brentq(lambda u: f(u) - u, -0.5, 0.3, xtol=1e-15) == pytest.approx(OUTER_LOW, abs=1e-15)
    assert brentq(lambda u: f(u) - u, 0.7, 1.5, xtol=1e-15) == pytest.approx(OUTER_HIGH, abs=1e-15)


def test_activation_values():
    p = SigmoidParams(10.0, 0.5)
    assert activation(0.5, p) == 0.5
    assert activation(0.0, p) == pytest.approx(1 / (1 + math.exp(5)), rel=1e-12)
    assert activation(0.0, kind="tanh") == 0.0
    assert activation(0.0, kind="identity") == 0.0
    assert activation(np.array([0.49, 0.5, 0.51]), p, "heaviside").tolist() == [0.0, 1.0, 1.0]
    with pytest.raises(ValueError):
        activation(0.0, kind="relu")
    with pytest.raises(ValueError):
        SigmoidParams(0.0, 0.0)


def test_zero_rest_property():
    assert not bistable_config().satisfies_zero_rest()
    for kind in ("identity", "tanh"):
        assert ConstantFieldConfig(1, 1, kind).satisfies_zero_rest()
    assert ConstantFieldConfig(1, 1, "heaviside", SigmoidParams(1, 0.5)).satisfies_zero_rest()


def test_bistable_fixed_points():
    report = find_fixed_points(bistable_config())
    assert len(report) == 3
    assert report.pattern == ["stable", "unstable", "stable"]
    assert report[0].u0 == pytest.approx(OUTER_LOW, abs=1e-10)
    assert report[1].u0 == pytest.approx(0.5, abs=1e-10)
    assert report[2].u0 == pytest.approx(OUTER_HIGH, abs=1e-10)
    assert report[1].criterion_value == pytest.approx(2.5)
    assert [p.u0 for p in report] == sorted(p.u0 for p in report)


def test_linear_fixed_points():
    stable = find_fixed_points(ConstantFieldConfig(1.0, 0.5, "identity"))
    assert len(stable) == 1 and stable[0].u0 == pytest.approx(0, abs=1e-12)
    assert stable[0].stability == "stable" and stable[0].criterion_value == 0.5
    unstable = find_fixed_points(ConstantFieldConfig(2.0, 1.0, "identity"))
    assert len(unstable) == 1 and unstable[0].stability == "unstable"


def test_heaviside_plateaus():
    both = find_fixed_points(ConstantFieldConfig(1, 1, "heaviside", SigmoidParams(1, 0.5)))
    assert [p.u0 for p in both] == [0.0, 1.0] and both.pattern == ["stable", "stable"]
    low_only = find_fixed_points(ConstantFieldConfig(1, 0.3, "heaviside", SigmoidParams(1, 0.5)))
    assert [p.u0 for p in low_only] == [0.0]


def test_no_bracket_flag():
    cfg = ConstantFieldConfig(1, 1, "sigmoid", SigmoidParams(10, 0.5), bracket=(2.0, 3.0))
    report = find_fixed_points(cfg)
    assert len(report) == 0 and report.no_bracket


def test_marginal_classification():
    assert classify(1.0) == "marginal"
    assert classify(0.999) == "stable" and classify(1.001) == "unstable"


def test_integrate_converges():
    cfg = bistable_config()
    assert abs(integrate(cfg, 0.4, 0.1, 2000)[-1] - OUTER_LOW) < 1e-6
    assert abs(integrate(cfg, 0.6, 0.1, 2000)[-1] - OUTER_HIGH) < 1e-6
    mid = integrate(cfg, 0.5, 0.1, 100)
    assert np.all(np.abs(mid - 0.5) < 1e-9)
    with pytest.raises(ValueError):
        integrate(cfg, 0.4, 2.0, 10)


def test_integrate_matches_fine_ode_solution():
    from scipy.integrate import solve_ivp

    cfg = bistable_config()
    sol = solve_ivp(lambda t, u: cfg.rhs(u), (0, 5), [0.4], rtol=1e-11, atol=1e-13)
    euler = integrate(cfg, 0.4, 1e-4, 50000)
    assert euler[-1] == pytest.approx(sol.y[0, -1], abs=1e-4)


def test_classification_by_perturbation():
    cfg = bistable_config()
    report = find_fixed_points(cfg)
    stable = [p.u0 for p in report if p.stability == "stable"]
    for p in report:
        for eps in (1e-3, -1e-3):
            end = integrate(cfg, p.u0 + eps, 0.1, 3000)[-1]
            if p.stability == "stable":
                assert abs(end - p.u0) < 1e-6
            else:
                nearest = min(stable, key=lambda s: abs(s - (p.u0 + eps)))
                assert abs(end - nearest) < 1e-6


@settings(max_examples=60, deadline=None)
@given(beta=st.floats(2.0, 20.0), theta=st.floats(0.2, 0.8), gain=st.floats(0.3, 2.0))
def test_criterion_matches_finite_difference(beta, theta, gain):
    cfg = ConstantFieldConfig(gain, 1.0, "sigmoid", SigmoidParams(beta, theta))
    for p in find_fixed_points(cfg):
        slope = finite_difference_slope(cfg, p.u0)
        analytic = p.criterion_value - 1.0
        assert slope == pytest.approx(analytic, rel=1e-4, abs=1e-9)
        if p.stability != "marginal":
            assert np.sign(slope) == np.sign(analytic)


@settings(max_examples=60, deadline=None)
@given(beta=st.floats(2.0, 20.0), theta=st.floats(0.2, 0.8), gain=st.floats(0.3, 2.0))
def test_roots_are_scan_sign_changes(beta, theta, gain):
    cfg = ConstantFieldConfig(gain, 1.0, "sigmoid", SigmoidParams(beta, theta))
    lo, hi = cfg.scan_bracket()
    grid = np.linspace(lo, hi, int(round((hi - lo) / cfg.scan_step)) + 1)
    g = gain * activation(grid, cfg.sigmoid) - grid
    changes = int(np.sum(g[:-1] * g[1:] < 0) + np.sum(g == 0))
    report = find_fixed_points(cfg)
    assert len(report) == changes
    for p in report:
        assert abs(gain * activation(p.u0, cfg.sigmoid) - p.u0) < 1e-9


def test_config_validation():
    with pytest.raises(ValueError):
        ConstantFieldConfig(0.0, 1.0)
    with pytest.raises(ValueError):
        ConstantFieldConfig(1.0, 1.0, tau=0.0)
    with pytest.raises(ValueError):
        ConstantFieldConfig(1.0, 1.0, "softplus")

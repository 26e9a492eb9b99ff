import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dilastab.quadrature import (
    Divergence,
    ExpTail,
    NonConvergence,
    PowerTail,
    QuadratureConfig,
    integrate_adaptive,
)


def test_gaussian_density_integrates_to_one():
    fn = lambda u: np.exp(-0.5 * u * u) / math.sqrt(2 * math.pi)  # noqa: E731
    res = integrate_adaptive(fn, tail=ExpTail(1.0, 1.0))
    assert res.value == pytest.approx(1.0, abs=1e-10)
    assert res.error < 1e-8


def test_rational_integrand_with_power_tail():
    res = integrate_adaptive(lambda u: (1 + u * u) ** -2, (0.0,), tail=PowerTail(1.0, 4.0))
    assert res.value == pytest.approx(math.pi / 2, rel=1e-9)
    assert abs(res.value - math.pi / 2) <= res.error + 1e-12


def test_breakpoint_hint_saves_subdivisions():
    fn = lambda u: np.abs(u - 1.0) * np.exp(-u)  # noqa: E731
    cfg = QuadratureConfig(rel_tol=1e-10, abs_tol=1e-14)
    # integral of |u-1| e^-u over [0, pi], by parts on each side of the kink
    exact = 2 * math.exp(-1) - math.pi * math.exp(-math.pi)
    hinted = integrate_adaptive(fn, (1.0,), cfg, lower=0.0, upper=math.pi)
    blind = integrate_adaptive(fn, (), cfg, lower=0.0, upper=math.pi)
    assert hinted.value == pytest.approx(exact, rel=1e-9)
    assert blind.value == pytest.approx(exact, rel=1e-8)
    assert hinted.subdivisions < blind.subdivisions


def test_error_estimate_covers_true_error():
    for p in (0.3, -0.4, 1.5):
        res = integrate_adaptive(lambda u: u**p, (), QuadratureConfig(rel_tol=1e-6), lower=0.0, upper=1.0)
        assert abs(res.value - 1 / (p + 1)) <= max(res.error, 1e-14)


def test_finite_interval_without_tail():
    res = integrate_adaptive(np.sin, (), lower=0.0, upper=math.pi)
    assert res.value == pytest.approx(2.0, abs=1e-12)


def test_budget_exhaustion_raises_with_estimate():
    cfg = QuadratureConfig(rel_tol=1e-12, abs_tol=1e-15, max_subdivisions=3)
    with pytest.raises(NonConvergence) as exc:
        integrate_adaptive(lambda u: np.sin(1 / np.maximum(u, 1e-3)), (), cfg, lower=0.0, upper=1.0, layer="outer")
    assert math.isfinite(exc.value.value)
    assert exc.value.error > 0
    assert "outer" in str(exc.value)


def test_nonintegrable_tail_is_rejected():
    with pytest.raises(Divergence):
        PowerTail(1.0, 1.0)
    with pytest.raises(Divergence):
        PowerTail(2.0, 0.5)
    assert PowerTail(0.0, 0.5).mass(3.0) == 0.0


def test_tail_masses():
    assert PowerTail(2.0, 3.0).mass(2.0) == pytest.approx(2.0 * 2.0**-2 / 2)
    assert PowerTail(1.0, 3.0, start=5.0).mass(1.0) == math.inf
    assert ExpTail(3.0, 2.0).mass(1.0) == pytest.approx(1.5 * math.exp(-2.0))


def test_config_validation_and_scaling():
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=-1.0)
    with pytest.raises(ValueError):
        QuadratureConfig.from_dict({"reltol": 1e-3})
    cfg = QuadratureConfig.from_dict({"rel_tol": 1e-6, "max_subdivisions": 50.0})
    assert cfg.max_subdivisions == 50
    assert QuadratureConfig.from_dict(cfg.to_dict()) == cfg
    half = cfg.scaled(0.5)
    assert half.rel_tol == 5e-7 and half.abs_tol == cfg.abs_tol / 2


def test_degenerate_and_reversed_intervals():
    assert integrate_adaptive(np.sin, (), lower=1.0, upper=1.0).value == 0.0
    with pytest.raises(ValueError):
        integrate_adaptive(np.sin, (), lower=2.0, upper=1.0)


@given(st.floats(0.2, 5.0), st.floats(-3.0, 3.0))
def test_shifted_scaled_gaussian(sigma, mu):
    # exp(-x^2/2) <= exp(1/2 - |x|)
    fn = lambda u: np.exp(-0.5 * ((u - mu) / sigma) ** 2)  # noqa: E731
    res = integrate_adaptive(fn, (mu,), tail=ExpTail(math.exp(0.5 + abs(mu) / sigma), 1.0 / sigma), scale=sigma)
    assert res.value == pytest.approx(sigma * math.sqrt(2 * math.pi), rel=1e-8)

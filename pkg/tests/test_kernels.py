import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import gamma

from conftest import all_catalog_kernels, fbm_cov, subfbm_cov
from dilastab import kernels as K
from dilastab.kernels import ScalingLaw


def test_fbm_constant_gives_unit_variance_normalization():
    # closed form of the constant, written out independently
    for H in (0.6, 0.75, 0.9):
        c = math.sqrt(gamma(2 * H + 1) * math.sin(math.pi * H)) / gamma(H + 0.5)
        assert K.fbm_constant(H) == pytest.approx(c, rel=1e-13)


def test_fractional_ma_spot_values():
    k = K.fractional_ma(0.75)
    assert k.eval(2.0, 1.0) == pytest.approx(k.c, rel=1e-15)
    assert k.eval(1.0, 3.0) == 0.0
    # defined as 0 on the case boundaries
    assert k.eval(1.0, 0.0) == 0.0 and k.eval(-1.0, -1.0) == 0.0
    assert k.eval(2.0, 1.0) == pytest.approx(4**0.25 * k.eval(0.5, 0.25), rel=1e-15)


def test_sub_fractional_spot_values():
    k = K.sub_fractional(0.75)
    assert np.all(k.eval(0.0, np.linspace(-5, 5, 11)) == 0.0)
    c = K.fbm_constant(0.75)
    # at u = -t the second bracket is 0 - 1, not the boundary value 0
    assert k.eval(1.0, -1.0) == pytest.approx(c / math.sqrt(2) * (2**0.25 - 2), rel=1e-14)


def test_sub_fractional_far_field_matches_direct_formula():
    # the cancellation-free branch and the naive difference agree where both are accurate
    k = K.sub_fractional(0.7)
    u = -np.array([2.5, 4.0, 10.0, 30.0])
    h = 0.2
    naive = k._ma.c / math.sqrt(2) * ((1 - u) ** h - 2 * (-u) ** h + (-1 - u) ** h)
    assert np.allclose(k.eval(1.0, u), naive, rtol=1e-10)


def test_log_fractional_spot_values():
    k = K.log_fractional()
    assert k.eval(2.0, 1.0) == 0.0
    assert k.eval(3.0, 1.0) == pytest.approx(math.log(2), rel=1e-15)
    assert k.eval(1.0, 1.0) == 0.0


def test_sghir_spot_values():
    k = K.sghir(1.0)
    assert k.eval(1.0, 1.0) == pytest.approx(1 - math.exp(-1), rel=1e-15)
    assert k.eval(1.0, -1.0) == 0.0 and k.eval(-1.0, 1.0) == 0.0 and k.eval(1.0, 0.0) == 0.0
    T, t, u = 3.0, 0.7, 1.3
    assert k.eval(t, u) == pytest.approx(T**1.0 * k.eval(t / T, u * T), rel=1e-14)


def test_well_balanced_spot_values():
    k = K.well_balanced(0.6, 1.5)
    assert k.eval(2.0, 1.0) == 0.0
    assert k.eval(3.0, 1.0) == pytest.approx(2 ** (-1 / 15) - 1, rel=1e-14)
    assert 2 ** (-1 / 15) - 1 == pytest.approx(-0.04517, abs=2e-5)


@given(st.floats(0.05, 20), st.floats(-10, 10), st.floats(-10, 10))
def test_well_balanced_homogeneity(T, t, v):
    k = K.well_balanced(0.6, 1.5)
    lhs = k.eval(T * t, T * v)
    rhs = T ** (0.6 - 1 / 1.5) * k.eval(t, v)
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-300)


def test_zbeta_aux_examples():
    assert K.zbeta_aux(1.0, 1.0) == pytest.approx(1 - math.exp(-1), rel=1e-15)
    assert K.zbeta_aux(1.0, -1.0) == 0.0
    assert K.zbeta_aux(1.0, 2.0 * 3.0) == pytest.approx(2.0 * K.zbeta_aux(2.0, 3.0), rel=1e-15)
    assert K.zbeta_aux(0.5 * 2, 3.0) * 2 == pytest.approx((1 - math.exp(-3)) / 0.5, rel=1e-15)


@given(st.floats(1e-6, 50), st.floats(0.01, 50), st.floats(1e-3, 50))
def test_zbeta_aux_identity(x, T, t):
    assert K.zbeta_aux(x, T * t) == pytest.approx(T * K.zbeta_aux(T * x, t), rel=1e-12)


def test_eval_broadcasts():
    k = K.log_fractional()
    out = k.eval(np.array([[1.0], [2.0]]), np.array([0.5, 3.0, 5.0]))
    assert out.shape == (2, 3)
    assert out[1, 1] == pytest.approx(math.log(1 / 3))


@pytest.mark.parametrize(
    "kernel",
    [K.sub_fractional(H) for H in (0.6, 0.7, 0.75, 0.9)]
    + [K.log_fractional(), K.fractional_ma(0.7)]
    + [K.sghir(k) for k in (0.5, 1.0, 1.5)],
    ids=repr,
)
def test_claimed_law_is_exact(kernel):
    assert K.check_kernel_scaling(kernel, kernel.claimed_law, 10_000, 0) <= 1e-10


def test_wrong_law_is_detected():
    assert K.check_kernel_scaling(K.log_fractional(), ScalingLaw(0.6, 1.0), 10_000, 0) > 0.01
    assert K.check_kernel_scaling(K.sghir(1.0), ScalingLaw(0.5, 1.0), 10_000, 0) > 0.01


@given(st.integers(0, 2**32))
def test_kernel_scaling_over_seeds(seed):
    k = K.sub_fractional(0.8)
    assert K.check_kernel_scaling(k, k.claimed_law, 200, seed) <= 1e-10


def test_l2_norm_examples():
    assert K.l2_norm_sq(K.sub_fractional(0.75), 0.0) == 0.0
    for H in (0.6, 0.7, 0.75):
        assert K.l2_norm_sq(K.fractional_ma(H), 1.0) == pytest.approx(1.0, abs=1e-8)
    assert K.l2_norm_sq(K.sghir(1.0), 1.0) == pytest.approx(2 * math.log(2), rel=1e-8)


def test_l2_norm_fractional_ma_riemann_oracle():
    # midpoint sum on a fine grid, far tail from the series leading term
    H, h = 0.7, 0.2
    c = K.fbm_constant(H)
    du = 1e-4
    u = np.arange(-200.0, 1.0, du) + du / 2
    f = c * (np.clip(1 - u, 0, None) ** h - np.clip(-u, 0, None) ** h)
    riemann = float(np.sum(f * f) * du)
    # the singularity at u = 1 is integrable; the cell [1-du, 1] adds c^2 du^(2h+1)/(2h+1)
    riemann += c * c * du ** (2 * h + 1) / (2 * h + 1) * (1 - (0.5) ** (2 * h + 1))
    tail = c * c * h * h * 200 ** (2 * h - 1) / (1 - 2 * h)
    assert riemann + tail == pytest.approx(1.0, abs=2e-4)


@pytest.mark.parametrize("s, t", [(0.5, 1.0), (1.0, 2.0), (2.0, 0.5), (1.0, 1.0)])
def test_l2_inner_reproduces_covariances(s, t):
    assert K.l2_inner(K.fractional_ma(0.75), s, t).value == pytest.approx(fbm_cov(0.75, s, t), abs=1e-8)
    assert K.l2_inner(K.sub_fractional(0.75), s, t).value == pytest.approx(subfbm_cov(0.75, s, t), abs=1e-8)


def test_log_fractional_covariance_is_finite_and_scales():
    k = K.log_fractional()
    v1 = K.l2_norm_sq(k, 1.0)
    v3 = K.l2_norm_sq(k, 3.0)
    # alpha - delta/2 = 0 and delta = 1: the norm grows linearly in t
    assert v3 == pytest.approx(3.0 * v1, rel=1e-7)
    assert v1 == pytest.approx(math.pi**2, rel=1e-7)


def test_time_domain_checks():
    with pytest.raises(ValueError):
        K.l2_norm_sq(K.sghir(1.0), 0.0)
    with pytest.raises(ValueError):
        K.l2_norm_sq(K.sub_fractional(0.7), -1.0)


@pytest.mark.parametrize(
    "spec",
    [
        {"name": "fractional_ma", "params": {"H": 0.4}},
        {"name": "sghir", "params": {"K": 2.0}},
        {"name": "well_balanced", "params": {"H": 0.5, "stable_index": 2.0}},
        {"name": "nope"},
        {"name": "sghir", "params": {"k": 1.0}},
    ],
)
def test_bad_kernel_specs(spec):
    with pytest.raises(ValueError):
        K.kernel_from_dict(spec)


@pytest.mark.parametrize("kernel", all_catalog_kernels(), ids=repr)
def test_dict_roundtrip_and_hash(kernel):
    again = K.kernel_from_dict(kernel.to_dict())
    assert again == kernel and hash(again) == hash(kernel)


@pytest.mark.parametrize("kernel", all_catalog_kernels(), ids=repr)
def test_envelope_bounds_kernel(kernel):
    for t in (0.5, 1.0, 2.0):
        env = kernel.envelope(t)
        u = env.start * np.geomspace(1.0001, 1e4, 200)
        for sign in (1, -1):
            if sign < 0 and kernel.support is K.Support.POSITIVE_HALFLINE:
                continue
            vals = np.abs(kernel.eval(t, sign * u))
            assert np.all(vals <= env.coef * u ** -env.power * (1 + 1e-12))

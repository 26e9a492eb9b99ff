import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import all_catalog_kernels, subfbm_cov
from dilastab import charexp as ce
from dilastab import kernels as K
from dilastab import levy_models as lm
from dilastab.quadrature import QuadratureConfig

TWO_POINT = lm.LevyModel.two_point(1.0, 1.0)
LAPLACE = lm.LevyModel.laplace(1.0, 1.0)

# from scripts/derive_oracles.py (fixed-grid sums and a semi-closed Z_beta form)
RIEMANN_GFLP_SUBFRAC = 0.32907290033788944
RIEMANN_STABLE_WB = 0.15565916842673838
RIEMANN_ZBETA_0 = 0.7394421177242062
SEMI_CLOSED_ZBETA = {-0.5: 1.413224927174595, 0.0: 0.7396017692198444, 0.5: 0.954061969730844}
# 30-digit arbitrary-precision quadrature, computed offline
HIGH_PREC = {
    "gflp_1": 0.329073795232622377,
    "gflp_12": 0.157833115733819294,
    "stable_wb": 0.155659181992629273,
}


def test_query_normalization():
    q = ce.ExponentQuery.of(([1, 2], [0.5, -1]))
    assert q.times == (1.0, 2.0) and q.thetas == (0.5, -1.0)
    assert ce.ExponentQuery.of(q) is q
    assert ce.ExponentQuery.of(q.to_dict()) == q
    assert ce.ExponentQuery(1.0, 0.0).trivial
    for bad in [((), ()), ((1.0,), (1.0, 2.0)), ((math.nan,), (1.0,))]:
        with pytest.raises(ValueError):
            ce.ExponentQuery(*bad)


def test_gflp_against_brute_force_oracles():
    k = K.sub_fractional(0.7)
    v = ce.gflp_exponent(TWO_POINT, k, ([1.0], [1.0]))
    assert abs(v - RIEMANN_GFLP_SUBFRAC) <= 1e-6
    assert v == pytest.approx(HIGH_PREC["gflp_1"], rel=1e-9)
    v2 = ce.gflp_exponent(TWO_POINT, k, ([1.0, 2.0], [1.0, -0.5]))
    assert v2 == pytest.approx(HIGH_PREC["gflp_12"], rel=1e-9)


def test_gflp_error_estimate_covers_true_error():
    oracle = ce.GFLPOracle(TWO_POINT, K.sub_fractional(0.7), QuadratureConfig(rel_tol=1e-5))
    value, err = oracle.evaluate([1.0], [1.0])
    assert abs(value - HIGH_PREC["gflp_1"]) <= err


@pytest.mark.parametrize("kernel", all_catalog_kernels(), ids=repr)
def test_trivial_queries_are_zero(kernel):
    assert ce.gflp_exponent(TWO_POINT, kernel, ([1.0, 2.0], [0.0, 0.0])) == 0.0
    assert ce.stable_exponent(kernel, 1.5, 1.0, ([1.0], [0.0])) == 0.0


def test_small_theta_matches_isometry():
    k = K.sub_fractional(0.7)
    theta = 1e-3
    psi = ce.gflp_exponent(TWO_POINT, k, ([1.0], [theta]))
    quad_form = 0.5 * lm.second_moment(TWO_POINT) * theta**2 * K.l2_norm_sq(k, 1.0)
    assert psi / quad_form == pytest.approx(1.0, abs=1e-4)


@pytest.mark.parametrize("kernel", all_catalog_kernels()[:4], ids=repr)
def test_gflp_bounded_by_quadratic_form(kernel):
    # phi(x) <= m2 x^2 / 2 under the integral
    for th in (0.5, 2.0):
        psi = ce.gflp_exponent(LAPLACE, kernel, ([1.0], [th]))
        assert 0 < psi <= 0.5 * 2.0 * th**2 * K.l2_norm_sq(kernel, 1.0) * (1 + 1e-8)


def test_covariance_examples():
    sub = K.sub_fractional(0.75)
    assert ce.gflp_covariance(TWO_POINT, sub, 1.0, 1.0) == pytest.approx(2 - math.sqrt(2), abs=1e-8)
    assert ce.gflp_covariance(TWO_POINT, K.fractional_ma(0.75), 1.0, 2.0) == pytest.approx(math.sqrt(2), abs=1e-8)
    for s in (0.5, 1.0, 2.0):
        assert ce.gflp_covariance(LAPLACE, sub, s, s) == pytest.approx(2.0 * K.l2_norm_sq(sub, s), rel=1e-10)
        for t in (0.5, 1.0, 2.0):
            assert ce.gflp_covariance(TWO_POINT, sub, s, t) == pytest.approx(subfbm_cov(0.75, s, t), abs=1e-8)


@given(st.floats(-3, 3), st.floats(-3, 3))
def test_gflp_is_even(a, b):
    k = K.log_fractional()
    q = ([1.0, 2.0], [a, b])
    neg = ([1.0, 2.0], [-a, -b])
    assert ce.gflp_exponent(TWO_POINT, k, q) == pytest.approx(ce.gflp_exponent(TWO_POINT, k, neg), abs=1e-9)


def test_gram_matrix_is_positive_semidefinite():
    k = K.sub_fractional(0.75)
    ts = (0.5, 1.0, 3.0)
    G = np.array([[ce.gflp_covariance(TWO_POINT, k, s, t) for t in ts] for s in ts])
    assert np.allclose(G, G.T, atol=1e-10)
    assert np.linalg.eigvalsh(G).min() > -1e-9


def test_stable_exponent_against_oracles():
    k = K.well_balanced(0.6, 1.5)
    v = ce.stable_exponent(k, 1.5, 1.0, ([1.0], [1.0]))
    assert abs(v - RIEMANN_STABLE_WB) <= 1e-5
    assert v == pytest.approx(HIGH_PREC["stable_wb"], rel=1e-9)


def test_stable_exponent_change_of_variables():
    k = K.well_balanced(0.6, 1.5)
    T, th = 2.0, 0.8
    lhs = ce.stable_exponent(k, 1.5, 1.0, ([T], [th]))
    rhs = T * ce.stable_exponent(k, 1.5, 1.0, ([1.0], [T ** (0.6 - 1 / 1.5) * th]))
    assert lhs == pytest.approx(rhs, rel=1e-8)


def test_stable_exponent_sigma_and_homogeneity():
    k = K.well_balanced(0.6, 1.5)
    base = ce.stable_exponent(k, 1.5, 1.0, ([1.0, 2.0], [1.0, 0.5]))
    assert ce.stable_exponent(k, 1.5, 2.0, ([1.0, 2.0], [1.0, 0.5])) == pytest.approx(2**1.5 * base, rel=1e-8)
    assert ce.stable_exponent(k, 1.5, 1.0, ([1.0, 2.0], [3.0, 1.5])) == pytest.approx(3**1.5 * base, rel=1e-8)


def test_stable_exponent_gaussian_case_is_half_norm():
    # stable index 2 with sigma^2 = 1/2 gives the Gaussian exponent ½ θ² ||f||²
    k = K.fractional_ma(0.7)
    v = ce.stable_exponent(k, 2.0, math.sqrt(0.5), ([1.0], [1.0]))
    assert v == pytest.approx(0.5, rel=1e-8)


@pytest.mark.parametrize("beta", [-0.5, 0.0, 0.5])
def test_zbeta_against_semi_closed_form(beta):
    assert ce.zbeta_exponent(beta, 1.0, ([1.0], [1.0])) == pytest.approx(SEMI_CLOSED_ZBETA[beta], rel=1e-9)


def test_zbeta_against_double_riemann():
    v = ce.zbeta_exponent(0.0, 1.0, ([1.0], [1.0]))
    assert abs(v - RIEMANN_ZBETA_0) / v <= 1e-3


def test_zbeta_basic_properties():
    assert ce.zbeta_exponent(0.0, 1.0, ([1.0, 2.0], [0.0, 0.0])) == 0.0
    one = ce.zbeta_exponent(0.0, 1.0, ([1.0], [1.0]))
    two = ce.zbeta_exponent(0.0, 1.0, ([1.0], [2.0]))
    assert two > one
    assert ce.zbeta_exponent(0.0, 3.0, ([1.0], [1.0])) == pytest.approx(3 * one, rel=1e-12)
    # zero times and zero thetas drop out
    assert ce.zbeta_exponent(0.0, 1.0, ([0.0, 1.0], [5.0, 1.0])) == pytest.approx(one, rel=1e-12)


def test_zbeta_opposite_signs_and_error():
    oracle = ce.ZBetaOracle(0.0)
    v, err = oracle.evaluate([1.0, 2.0], [1.0, -0.5])
    assert v > 0 and err < 1e-6 * v


def test_zbeta_rejects_bad_parameters():
    with pytest.raises(ValueError):
        ce.zbeta_exponent(1.0, 1.0, ([1.0], [1.0]))
    with pytest.raises(ValueError):
        ce.zbeta_exponent(0.0, -1.0, ([1.0], [1.0]))
    with pytest.raises(ValueError):
        ce.zbeta_exponent(0.0, 1.0, ([-1.0], [1.0]))


def test_wiener_examples():
    assert ce.wiener_exponent(([1.0], [1.0])) == 0.5
    assert ce.wiener_exponent(([1.0, 2.0], [1.0, -1.0])) == 0.5
    assert ce.wiener_exponent(([1.0, 2.0], [0.0, 0.0])) == 0.0


@given(st.lists(st.tuples(st.floats(0, 10), st.floats(-10, 10)), min_size=1, max_size=5))
def test_wiener_exponent_is_nonnegative(pairs):
    times, thetas = zip(*pairs)
    assert ce.wiener_exponent((times, thetas)) >= -1e-9 * (1 + sum(t * x * x for t, x in pairs))


def test_levy_oracle_through_indicator_kernel():
    # the indicator kernel turns the integral back into the driver itself
    ind = K.Indicator()
    for q in [([1.0], [0.7]), ([0.5, 2.0], [1.0, -0.3])]:
        via_kernel = ce.gflp_exponent(LAPLACE, ind, q)
        direct = lm.levy_multi_exponent(LAPLACE, *q)
        assert via_kernel == pytest.approx(direct, rel=1e-10)


def test_oracle_from_dict_roundtrip():
    specs = [
        {"type": "levy", "model": TWO_POINT.to_dict()},
        {"type": "stable_levy", "H": 0.7},
        {"type": "gflp", "model": TWO_POINT.to_dict(), "kernel": {"name": "sghir", "params": {"K": 1.0}}},
        {"type": "stable_integral", "kernel": {"name": "well_balanced", "params": {"H": 0.6, "stable_index": 1.5}}, "stable_index": 1.5},
        {"type": "zbeta", "beta": 0.0, "quadrature": {"rel_tol": 1e-6}},
        {"type": "wiener"},
    ]
    for spec in specs:
        oracle = ce.oracle_from_dict(spec)
        again = ce.oracle_from_dict(oracle.describe())
        assert again.describe() == oracle.describe()
        assert oracle([1.0], [0.5]) == again([1.0], [0.5])
    with pytest.raises(ValueError):
        ce.oracle_from_dict({"type": "fbm"})

"""Brute-force reference values for the quadrature-backed exponents.

Everything here is deliberately naive: fixed grids, midpoint sums and
closed-form tail corrections, sharing no code with the package beyond the
normalizing constant.  The printed numbers are frozen in the test suite.

    python scripts/derive_oracles.py
"""

import math
import time

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma


def fbm_c(H):
    return math.sqrt(gamma(2 * H + 1) * math.sin(math.pi * H)) / gamma(H + 0.5)


def _midpoints(lo, hi, du):
    n = int(round((hi - lo) / du))
    return lo + du * (np.arange(n) + 0.5), du


def gflp_two_point_subfrac(H=0.7, theta=1.0, step=1e-4, radius=200.0):
    """∫ (1 - cos(theta f(1, u))) du for the sub-fractional kernel, two-point driver."""
    c, h = fbm_c(H), H - 0.5
    total = 0.0
    for lo in np.arange(-radius, radius, 10.0):
        u, du = _midpoints(lo, lo + 10.0, step)
        g = lambda t: np.clip(t - u, 0, None) ** h - np.clip(-u, 0, None) ** h  # noqa: E731
        f = c / math.sqrt(2) * (g(1.0) + g(-1.0))
        total += float(np.sum(1 - np.cos(theta * f)) * du)
    return total


def stable_well_balanced(H=0.6, a=1.5, step=1e-4, radius=200.0, window=0.01):
    """∫ |f(1, u)|^a du: midpoint sum, with quad patches on small windows around
    the singular points u = 0, 1 and beyond the radius."""
    e = H - 1 / a
    fn = lambda u: np.abs(np.abs(1 - u) ** e - np.abs(u) ** e) ** a  # noqa: E731
    total = 0.0
    for lo in np.arange(-radius, radius, 10.0):
        u, du = _midpoints(lo, lo + 10.0, step)
        keep = (np.abs(u) > window) & (np.abs(u - 1) > window)
        total += float(np.sum(fn(u[keep])) * du)
    for c in (0.0, 1.0):
        total += quad(fn, c - window, c, limit=200)[0] + quad(fn, c, c + window, limit=200)[0]
    total += quad(fn, radius, np.inf, limit=500)[0] + quad(fn, -np.inf, -radius, limit=500)[0]
    return total


def zbeta_double_riemann(beta=0.0, C=1.0, t=1.0, theta=1.0):
    """Inner step 1e-3 on [-50, t], outer log-grid 1e-4..1e4 with 4000 points."""
    s, ds = _midpoints(-50.0, t, 1e-3)
    y = np.linspace(math.log(1e-4), math.log(1e4), 4000)
    dy = y[1] - y[0]
    x = np.exp(y)
    F = lambda xx, tt: np.where(tt > 0, -np.expm1(-xx * np.clip(tt, 0, None)) / xx, 0.0)  # noqa: E731
    out = 0.0
    for xi in x:
        g = theta * (F(xi, t - s) - F(xi, -s))
        inner = float(np.sum(g * g) * ds)
        out += (math.expm1(-0.5 * inner)) * xi**beta * xi * dy
    return -C * out


def zbeta_semi_closed(beta=0.0, C=1.0, t=1.0, theta=1.0):
    """Single-time Z_beta with the inner integral in closed form."""

    def inner(x):
        em = -math.expm1(-x * t)
        # s < 0: e^{2xs} ((1 - e^{-xt})/x)^2
        before = em * em / (x * x) / (2 * x)
        # s in [0, t]: ((1 - e^{-x(t-s)})/x)^2, series when the closed form cancels
        if x * t < 1e-3:
            on = t**3 / 3 - x * t**4 / 4 + 7 * x * x * t**5 / 60
        else:
            on = (t - 2 * em / x + (1 - math.exp(-2 * x * t)) / (2 * x)) / (x * x)
        return on + before

    fn = lambda yy: math.expm1(-0.5 * theta**2 * inner(math.exp(yy))) * math.exp((beta + 1) * yy)  # noqa: E731
    return -C * quad(fn, -80, 80, limit=1000, epsabs=1e-15, epsrel=1e-13)[0]


def fbm_variance_riemann(H=0.7, step=1e-4, radius=200.0):
    c, h = fbm_c(H), H - 0.5
    u, du = _midpoints(-radius, 1.0, step)
    f = c * (np.clip(1 - u, 0, None) ** h - np.clip(-u, 0, None) ** h)
    far = c * c * h * h * radius ** (2 * h - 1) / (1 - 2 * h)
    return float(np.sum(f * f) * du) + far


def main():
    rows = []
    for name, fn in [
        ("gflp two_point sub_fractional(0.7) ({1},{1})", gflp_two_point_subfrac),
        ("stable well_balanced(0.6, 1.5) ({1},{1})", stable_well_balanced),
        ("zbeta beta=0 C=1 ({1},{1}) double Riemann", zbeta_double_riemann),
        ("zbeta beta=-0.5 semi-closed", lambda: zbeta_semi_closed(-0.5)),
        ("zbeta beta=0 semi-closed", lambda: zbeta_semi_closed(0.0)),
        ("zbeta beta=0.5 semi-closed", lambda: zbeta_semi_closed(0.5)),
        ("fbm variance H=0.7 t=1", fbm_variance_riemann),
        ("sghir(1) squared norm t=1", lambda: quad(lambda u: (-math.expm1(-u)) ** 2 / u**2, 0, np.inf, limit=200)[0]),
    ]:
        t0 = time.perf_counter()
        v = fn()
        rows.append((name, v, time.perf_counter() - t0))
        print(f"{name:50s} {float(v)!r:>24}  ({rows[-1][2]:.1f}s)", flush=True)


if __name__ == "__main__":
    main()

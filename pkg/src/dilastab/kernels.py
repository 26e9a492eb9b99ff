"""Deterministic kernels ``f(t, u)`` for generalized fractional Lévy processes.

Each kernel knows its claimed ``(alpha, delta)`` scaling law (if any), the
``u``-values where ``f(t, .)`` is non-smooth, and a power-law envelope
``|f(t, u)| <= coef |u|^-power`` for ``|u| >= start`` used to truncate
infinite integrals with a certified bias bound.  ``fractional_ma``, the log
and the negative-power kernels are 0 at ``u = 0`` and ``u = t``, which keeps
``eval`` total; ``sub_fractional`` uses the continuous formula everywhere.
"""

from __future__ import annotations

import abc
import enum
import math
from dataclasses import dataclass
from typing import ClassVar, NamedTuple, Sequence

import numpy as np
from scipy.special import binom, gammaln

from .quadrature import PowerTail, QuadratureConfig, integrate_adaptive

__all__ = [
    "ScalingLaw",
    "Support",
    "Envelope",
    "Kernel",
    "FractionalMA",
    "SubFractional",
    "LogFractional",
    "Sghir",
    "WellBalanced",
    "Indicator",
    "CATALOG",
    "fractional_ma",
    "sub_fractional",
    "log_fractional",
    "sghir",
    "well_balanced",
    "kernel_from_dict",
    "fbm_constant",
    "zbeta_aux",
    "check_kernel_scaling",
    "l2_norm_sq",
    "l2_inner",
]


@dataclass(frozen=True)
class ScalingLaw:
    """Dilative-stability parameters ``(alpha, delta)``."""

    alpha: float
    delta: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.delta)):
            raise ValueError("alpha and delta must be finite")

    @property
    def space_exponent(self) -> float:
        """``alpha - delta/2``: the power of T multiplying the thetas."""
        return self.alpha - self.delta / 2.0

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "delta": self.delta}


class Support(str, enum.Enum):
    WHOLE_LINE = "whole_line"
    POSITIVE_HALFLINE = "positive_halfline"


class Envelope(NamedTuple):
    coef: float
    power: float
    start: float


def _pos_pow(x: np.ndarray, p: float) -> np.ndarray:
    """``(x)_+^p`` with ``p > 0``."""
    return np.where(x > 0, np.abs(x) ** p, 0.0)


def _pow_diff(v: np.ndarray, x: np.ndarray, p: float) -> np.ndarray:
    """``(v (1 + x))^p - v^p`` for ``v > 0, x > -1`` without cancellation."""
    return v**p * np.expm1(p * np.log1p(x))


def _second_diff(p: float, x: np.ndarray) -> np.ndarray:
    """``(1 + x)^p + (1 - x)^p - 2`` for ``0 <= x <= 1``."""
    x = np.abs(x)
    small = x < 0.125
    xs = np.where(small, x, 0.0)
    x2 = xs * xs
    series = np.zeros_like(xs)
    power = np.ones_like(xs)
    for k in range(2, 24, 2):
        power = power * x2
        series = series + 2.0 * binom(p, k) * power
    xb = np.where(small, 0.5, np.minimum(x, 1.0))
    direct = (1 + xb) ** p + (1 - xb) ** p - 2.0
    return np.where(small, series, direct)


class Kernel(abc.ABC):
    name: ClassVar[str]
    support: ClassVar[Support] = Support.WHOLE_LINE
    # "real", "nonnegative" or "positive"
    time_domain: ClassVar[str] = "real"

    @property
    @abc.abstractmethod
    def params(self) -> dict: ...

    @property
    def claimed_law(self) -> ScalingLaw | None:
        return None

    @abc.abstractmethod
    def _eval(self, t: np.ndarray, u: np.ndarray) -> np.ndarray: ...

    def eval(self, t, u):
        """``f(t, u)``, broadcasting over array arguments."""
        t, u = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(u, dtype=float))
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self._eval(t, u)
        return out if out.ndim else float(out)

    def breakpoints(self, times: Sequence[float]) -> tuple[float, ...]:
        pts = {0.0}
        pts.update(float(t) for t in times)
        return tuple(sorted(pts))

    @abc.abstractmethod
    def envelope(self, t: float) -> Envelope:
        """Bound ``|f(t, u)| <= coef |u|^-power`` valid for ``|u| >= start``."""

    def scale(self, times: Sequence[float]) -> float:
        """Width of the first tail panel past the outermost breakpoint."""
        return max(1.0, max(abs(float(t)) for t in times))

    @property
    def lower(self) -> float:
        return 0.0 if self.support is Support.POSITIVE_HALFLINE else -math.inf

    def check_time(self, t: float) -> None:
        if self.time_domain == "nonnegative" and t < 0:
            raise ValueError(f"{self.name} is defined for t >= 0, got {t}")
        if self.time_domain == "positive" and t <= 0:
            raise ValueError(f"{self.name} is defined for t > 0, got {t}")

    def to_dict(self) -> dict:
        return {"name": self.name, "params": self.params}

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{self.name}({args})"

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.params == other.params

    def __hash__(self) -> int:
        return hash((self.name, tuple(sorted(self.params.items()))))


def fbm_constant(hurst: float) -> float:
    """Normalization making ``c * ((t-u)_+^(H-1/2) - (-u)_+^(H-1/2))`` a
    moving-average kernel of unit-variance fractional Brownian motion."""
    log_c2 = gammaln(2 * hurst + 1) + math.log(math.sin(math.pi * hurst)) - 2 * gammaln(hurst + 0.5)
    return math.exp(0.5 * log_c2)


def _check_hurst(hurst: float) -> float:
    hurst = float(hurst)
    if not 0.5 < hurst < 1.0:
        raise ValueError(f"H must lie in (1/2, 1), got {hurst}")
    return hurst


class FractionalMA(Kernel):
    """``c_H [(t-u)_+^(H-1/2) - (-u)_+^(H-1/2)]``: moving-average fractional Lévy motion."""

    name = "fractional_ma"

    def __init__(self, H: float):
        self.H = _check_hurst(H)
        self.c = fbm_constant(self.H)

    @property
    def params(self) -> dict:
        return {"H": self.H}

    @property
    def claimed_law(self) -> ScalingLaw:
        return ScalingLaw(self.H, 1.0)

    def _raw(self, t, u):
        """The formula itself, continuous in ``u`` since ``H > 1/2``."""
        h = self.H - 0.5
        both = (u < 0) & (t - u > 0)
        v = np.where(both, -u, 1.0)
        out = np.where(both, _pow_diff(v, t / v, h), _pos_pow(t - u, h) - _pos_pow(-u, h))
        return self.c * out

    def _eval(self, t, u):
        return np.where((u == t) | (u == 0), 0.0, self._raw(t, u))

    def envelope(self, t: float) -> Envelope:
        h = self.H - 0.5
        t = abs(t)
        return Envelope(self.c * h * t * 2 ** (1 - h), 1 - h, max(2 * t, 1e-300))


class SubFractional(Kernel):
    """``(1/sqrt 2) (g(t, u) + g(-t, u))`` with ``g`` the fractional_ma kernel."""

    name = "sub_fractional"
    time_domain = "nonnegative"

    def __init__(self, H: float):
        self._ma = FractionalMA(H)
        self.H = self._ma.H

    @property
    def params(self) -> dict:
        return {"H": self.H}

    @property
    def claimed_law(self) -> ScalingLaw:
        return ScalingLaw(self.H, 1.0)

    def _eval(self, t, u):
        out = (self._ma._raw(t, u) + self._ma._raw(-t, u)) / math.sqrt(2.0)
        # far left of both singular points the two kernels cancel to first order
        far = u < -2 * np.abs(t)
        v = np.where(far, -u, 1.0)
        h = self.H - 0.5
        tail = self._ma.c / math.sqrt(2.0) * v**h * _second_diff(h, t / v)
        return np.where(far, tail, out)

    def breakpoints(self, times):
        pts = {0.0}
        for t in times:
            pts.update((float(t), -float(t)))
        return tuple(sorted(pts))

    def envelope(self, t: float) -> Envelope:
        # second difference of v^h over [v - t, v + t]
        h = self.H - 0.5
        t = abs(t)
        coef = self._ma.c / math.sqrt(2.0) * h * (1 - h) * 2 ** (2 - h) * t * t
        return Envelope(coef, 2 - h, max(2 * t, 1e-300))


class LogFractional(Kernel):
    """``log|t-u| - log|u|``: log-fractional Lévy motion."""

    name = "log_fractional"

    @property
    def params(self) -> dict:
        return {}

    @property
    def claimed_law(self) -> ScalingLaw:
        return ScalingLaw(0.5, 1.0)

    def _eval(self, t, u):
        far = np.abs(u) > 2 * np.abs(t)
        ratio = np.where(far, t / np.where(far, u, 1.0), 0.0)
        out = np.where(far, np.log1p(-ratio), np.log(np.abs(t - u)) - np.log(np.abs(u)))
        return np.where((u == t) | (u == 0), 0.0, out)

    def envelope(self, t: float) -> Envelope:
        # |log(1 - x)| <= 2|x| for |x| <= 1/2
        t = abs(t)
        return Envelope(2 * t, 1.0, max(2 * t, 1e-300))


class Sghir(Kernel):
    """``(1 - exp(-u t)) u^(-(K+1)/2)`` on ``t, u > 0``."""

    name = "sghir"
    support = Support.POSITIVE_HALFLINE
    time_domain = "positive"

    def __init__(self, K: float):
        K = float(K)
        if not 0 < K < 2:
            raise ValueError(f"K must lie in (0, 2), got {K}")
        self.K = K

    @property
    def params(self) -> dict:
        return {"K": self.K}

    @property
    def claimed_law(self) -> ScalingLaw:
        return ScalingLaw(self.K / 2.0, -1.0)

    def _eval(self, t, u):
        inside = (t > 0) & (u > 0)
        us = np.where(inside, u, 1.0)
        out = -np.expm1(-us * t) * us ** (-(self.K + 1) / 2.0)
        return np.where(inside, out, 0.0)

    def breakpoints(self, times):
        pts = {0.0}
        pts.update(1.0 / float(t) for t in times if t > 0)
        return tuple(sorted(pts))

    def envelope(self, t: float) -> Envelope:
        return Envelope(1.0, (self.K + 1) / 2.0, 1e-300)

    def scale(self, times):
        return max(1.0, max(1.0 / float(t) for t in times if t > 0))


class WellBalanced(Kernel):
    """``|t-u|^(H-1/a) - |u|^(H-1/a)``: well-balanced linear fractional stable kernel.

    Carries no claimed law: it is both ``(H, 0)`` and ``(H - 1/a + 1/2, 1)``
    dilatively stable as a stable integral.
    """

    name = "well_balanced"

    def __init__(self, H: float, stable_index: float):
        H, a = float(H), float(stable_index)
        if not 0 < H < 1:
            raise ValueError(f"H must lie in (0, 1), got {H}")
        if not 0 < a <= 2:
            raise ValueError(f"stable_index must lie in (0, 2], got {a}")
        if math.isclose(H, 1.0 / a, rel_tol=0, abs_tol=1e-15):
            raise ValueError("H = 1/stable_index gives the zero kernel")
        self.H = H
        self.stable_index = a
        self.exponent = H - 1.0 / a

    @property
    def params(self) -> dict:
        return {"H": self.H, "stable_index": self.stable_index}

    def _eval(self, t, u):
        e = self.exponent
        far = np.abs(u) > 2 * np.abs(t)
        us = np.where(far, u, 1.0)
        out = np.where(far, _pow_diff(np.abs(us), -t / us, e), np.abs(t - u) ** e - np.abs(u) ** e)
        if e >= 0:
            return out
        return np.where((u == t) | (u == 0), 0.0, out)

    def envelope(self, t: float) -> Envelope:
        e = self.exponent
        t = abs(t)
        return Envelope(abs(e) * t * 2 ** (1 - e), 1 - e, max(2 * t, 1e-300))


class Indicator(Kernel):
    """``1(0 < u <= t)``: turns the integral back into the driver itself."""

    name = "indicator"
    time_domain = "positive"

    @property
    def params(self) -> dict:
        return {}

    def _eval(self, t, u):
        return np.where((u > 0) & (u <= t), 1.0, 0.0)

    def envelope(self, t: float) -> Envelope:
        return Envelope(0.0, math.inf, abs(t))


CATALOG: dict[str, type[Kernel]] = {
    "fractional_ma": FractionalMA,
    "sub_fractional": SubFractional,
    "log_fractional": LogFractional,
    "sghir": Sghir,
    "well_balanced": WellBalanced,
}


def fractional_ma(H: float) -> FractionalMA:
    return FractionalMA(H)


def sub_fractional(H: float) -> SubFractional:
    return SubFractional(H)


def log_fractional() -> LogFractional:
    return LogFractional()


def sghir(K: float) -> Sghir:
    return Sghir(K)


def well_balanced(H: float, stable_index: float) -> WellBalanced:
    return WellBalanced(H, stable_index)


def kernel_from_dict(spec: dict) -> Kernel:
    """Build a catalog kernel from ``{"name": ..., "params": {...}}``."""
    name = spec.get("name")
    if name not in CATALOG:
        raise ValueError(f"unknown kernel {name!r}; expected one of {sorted(CATALOG)}")
    params = spec.get("params") or {}
    try:
        return CATALOG[name](**params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for kernel {name!r}: {exc}") from None


def zbeta_aux(x, t):
    """``(1 - exp(-x t)) / x`` for ``x, t > 0`` and 0 otherwise."""
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    inside = (x > 0) & (t > 0)
    xs = np.where(inside, x, 1.0)
    out = np.where(inside, -np.expm1(-xs * t) / xs, 0.0)
    return out if out.ndim else float(out)


def check_kernel_scaling(kernel: Kernel, law: ScalingLaw, n_samples: int, seed: int) -> float:
    """Max relative deviation from ``f(t, u) = T^(alpha - delta/2) f(t/T, u/T^delta)``.

    Samples ``t, u`` standard normal (absolute values on a half-line domain or
    support) and ``T`` log-uniform on ``[0.1, 10]``.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    t = rng.standard_normal(n_samples)
    u = rng.standard_normal(n_samples)
    T = np.exp(rng.uniform(math.log(0.1), math.log(10.0), n_samples))
    if kernel.time_domain != "real":
        t = np.abs(t)
    if kernel.support is Support.POSITIVE_HALFLINE:
        u = np.abs(u)
    lhs = kernel.eval(t, u)
    rhs = T ** law.space_exponent * kernel.eval(t / T, u / T ** law.delta)
    return float(np.max(np.abs(lhs - rhs) / (np.abs(lhs) + 1e-300)))


def _product_tail(kernel: Kernel, s: float, t: float) -> PowerTail:
    es, et = kernel.envelope(s), kernel.envelope(t)
    coef = es.coef * et.coef
    if coef == 0:
        return PowerTail(0.0, math.inf, max(es.start, et.start))
    return PowerTail(coef, es.power + et.power, max(es.start, et.start))


def l2_inner(kernel: Kernel, s: float, t: float, cfg: QuadratureConfig | None = None):
    """``∫ f(s, u) f(t, u) du`` as a :class:`QuadResult`."""
    kernel.check_time(s)
    kernel.check_time(t)
    fn = lambda u: kernel.eval(s, u) * kernel.eval(t, u)  # noqa: E731
    return integrate_adaptive(
        fn,
        kernel.breakpoints((s, t)),
        cfg,
        lower=kernel.lower,
        tail=_product_tail(kernel, s, t),
        scale=kernel.scale((s, t)),
    )


def l2_norm_sq(kernel: Kernel, t: float, cfg: QuadratureConfig | None = None) -> float:
    """``∫ f(t, u)^2 du``."""
    return l2_inner(kernel, t, t, cfg).value

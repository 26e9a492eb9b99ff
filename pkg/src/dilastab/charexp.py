"""Characteristic-exponent oracles.

``psi_{t_1..t_k}(theta_1..theta_k)`` for

* generalized fractional Lévy processes, ``∫ phi(sum_j theta_j f(t_j, u)) du``;
* stable integrals, ``∫ |sigma sum_j theta_j f(t_j, u)|^a du``;
* the aggregation limit ``Z_beta`` (a nested double integral);
* Brownian motion and Lévy processes (closed forms).

Every quadrature-backed value comes with an error estimate that includes the
truncation bias of the infinite range.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import levy_models as lm
from .kernels import Kernel, Support, l2_inner, zbeta_aux
from .quadrature import (
    Divergence,
    ExpTail,
    NonConvergence,
    PowerTail,
    QuadratureConfig,
    QuadResult,
    integrate_adaptive,
)

__all__ = [
    "ExponentQuery",
    "gflp_exponent",
    "gflp_covariance",
    "stable_exponent",
    "zbeta_exponent",
    "wiener_exponent",
    "ExponentOracle",
    "LevyOracle",
    "StableLevyOracle",
    "GFLPOracle",
    "StableIntegralOracle",
    "ZBetaOracle",
    "WienerOracle",
    "oracle_from_dict",
]


@dataclass(frozen=True)
class ExponentQuery:
    times: tuple[float, ...]
    thetas: tuple[float, ...]

    def __post_init__(self):
        times = tuple(float(t) for t in np.atleast_1d(self.times))
        thetas = tuple(float(x) for x in np.atleast_1d(self.thetas))
        if not times or len(times) != len(thetas):
            raise ValueError("times and thetas must be non-empty and of equal length")
        if not all(map(math.isfinite, times + thetas)):
            raise ValueError("times and thetas must be finite")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "thetas", thetas)

    @classmethod
    def of(cls, q) -> "ExponentQuery":
        if isinstance(q, cls):
            return q
        if isinstance(q, dict):
            return cls(q["times"], q["thetas"])
        times, thetas = q
        return cls(times, thetas)

    @property
    def trivial(self) -> bool:
        return all(x == 0.0 for x in self.thetas)

    def to_dict(self) -> dict:
        return {"times": list(self.times), "thetas": list(self.thetas)}


def _require_nonnegative(q: ExponentQuery):
    if any(t < 0 for t in q.times):
        raise ValueError("times must be non-negative")


def _combined_tail(kernel: Kernel, q: ExponentQuery, weight: float, order: float) -> PowerTail:
    """Envelope of ``weight * |sum_j theta_j f(t_j, u)|^order`` for large ``|u|``."""
    amp, power, start = 0.0, math.inf, 1.0
    for t, th in zip(q.times, q.thetas):
        env = kernel.envelope(t)
        if th == 0 or env.coef == 0:
            start = max(start, env.start)
            continue
        amp += abs(th) * env.coef
        power = min(power, env.power)
        start = max(start, env.start)
    if amp == 0:
        return PowerTail(0.0, math.inf, start)
    return PowerTail(weight * amp**order, order * power, start)


def _sum_kernel(kernel: Kernel, q: ExponentQuery):
    times = np.array(q.times)
    thetas = np.array(q.thetas)

    def combo(u):
        return thetas @ kernel.eval(times[:, None], u[None, :])

    return combo


def _gflp(model: lm.LevyModel, kernel: Kernel, q: ExponentQuery, cfg: QuadratureConfig | None) -> QuadResult:
    for t in q.times:
        kernel.check_time(t)
    if q.trivial:
        return QuadResult(0.0, 0.0, 0)
    combo = _sum_kernel(kernel, q)
    # phi(x) <= m2 x^2 / 2 bounds the tail by the kernel envelopes
    tail = _combined_tail(kernel, q, 0.5 * lm.second_moment(model), 2.0)
    return integrate_adaptive(
        lambda u: lm.phi(model, combo(u)),
        kernel.breakpoints(q.times),
        cfg,
        lower=kernel.lower,
        tail=tail,
        scale=kernel.scale(q.times),
    )


def gflp_exponent(model: lm.LevyModel, kernel: Kernel, q, cfg: QuadratureConfig | None = None) -> float:
    """``∫ phi(sum_j theta_j f(t_j, u)) du`` by adaptive quadrature."""
    return _gflp(model, kernel, ExponentQuery.of(q), cfg).value


def gflp_covariance(model: lm.LevyModel, kernel: Kernel, s: float, t: float, cfg: QuadratureConfig | None = None) -> float:
    """``Cov(S_s, S_t) = E(L_1^2) ∫ f(s, u) f(t, u) du``."""
    return lm.second_moment(model) * l2_inner(kernel, s, t, cfg).value


def _stable(kernel: Kernel, stable_index: float, sigma: float, q: ExponentQuery, cfg) -> QuadResult:
    if not 0 < stable_index <= 2:
        raise ValueError("stable_index must lie in (0, 2]")
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    for t in q.times:
        kernel.check_time(t)
    if q.trivial:
        return QuadResult(0.0, 0.0, 0)
    combo = _sum_kernel(kernel, q)
    try:
        tail = _combined_tail(kernel, q, sigma**stable_index, stable_index)
    except Divergence as exc:
        raise Divergence(f"stable integral diverges for {kernel!r}: {exc}") from None
    return integrate_adaptive(
        lambda u: np.abs(sigma * combo(u)) ** stable_index,
        kernel.breakpoints(q.times),
        cfg,
        lower=kernel.lower,
        tail=tail,
        scale=kernel.scale(q.times),
    )


def stable_exponent(kernel: Kernel, stable_index: float, sigma: float, q, cfg: QuadratureConfig | None = None) -> float:
    """``∫ |sigma sum_j theta_j f(t_j, u)|^a du``: exponent of a symmetric a-stable integral."""
    return _stable(kernel, stable_index, sigma, ExponentQuery.of(q), cfg).value


def _zbeta_inner(x: float, times: np.ndarray, thetas: np.ndarray, cfg: QuadratureConfig) -> QuadResult:
    """``∫ (sum_j theta_j (F(x, t_j - s) - F(x, -s)))^2 ds`` over ``s < max t_j``."""

    at_zero = float(thetas @ zbeta_aux(x, times))

    def g(s):
        # for s < 0 the difference is exp(x s) F(x, t_j); subtracting directly cancels badly
        left = s < 0
        out = np.empty_like(s)
        out[left] = (np.exp(x * s[left]) * at_zero) ** 2
        right = s[~left]
        out[~left] = (thetas @ zbeta_aux(x, times[:, None] - right[None, :])) ** 2
        return out

    width = 1.0 / x
    t_max = float(times.max())
    pts = {0.0}
    for tj in times:
        pts.add(float(tj))
        # resolve the boundary layer of width 1/x left of each t_j
        step = width
        while step < tj:
            pts.add(float(tj - step))
            step *= 2.0
    # |sum_j theta_j F(x, t_j - s)| <= amp on [0, t_max], so the integral is at most `bound`;
    # an absolute target below rel_tol * min(bound, 1) keeps 1 - exp(-I/2) accurate
    amp = float(np.sum(np.abs(thetas) * np.minimum(times, width)))
    bound = amp * amp * t_max + at_zero * at_zero * width / 2.0
    inner_cfg = QuadratureConfig(
        rel_tol=cfg.rel_tol,
        abs_tol=max(1e-300, 1e-3 * cfg.rel_tol * min(bound, 1.0)),
        max_subdivisions=cfg.max_subdivisions,
        truncation_safety=cfg.truncation_safety,
    )
    return integrate_adaptive(
        g,
        sorted(pts),
        inner_cfg,
        lower=-math.inf,
        upper=t_max,
        tail=(ExpTail(at_zero * at_zero, 2.0 * x), None),
        scale=width,
        layer=f"inner x={x:.6g}",
    )


def _zbeta(beta: float, C: float, q: ExponentQuery, cfg: QuadratureConfig | None) -> QuadResult:
    if not -1 < beta < 1:
        raise ValueError("beta must lie in (-1, 1)")
    if not C > 0:
        raise ValueError("C must be positive")
    _require_nonnegative(q)
    cfg = cfg or QuadratureConfig()
    times = np.array(q.times)
    thetas = np.array(q.thetas)
    if q.trivial or not np.any((times > 0) & (thetas != 0)):
        return QuadResult(0.0, 0.0, 0)
    keep = times > 0
    times, thetas = times[keep], thetas[keep]

    def outer(y):
        vals = np.empty_like(y)
        errs = np.empty_like(y)
        for i, yi in enumerate(y):
            x = math.exp(yi)
            inner = _zbeta_inner(x, times, thetas, cfg)
            weight = C * x ** (beta + 1.0)
            vals[i] = -weight * math.expm1(-0.5 * inner.value)
            errs[i] = 0.5 * weight * math.exp(-0.5 * inner.value) * inner.error
        return vals, errs

    total = float(np.sum(np.abs(thetas)))
    t_max = float(times.max())
    # x -> 0: integrand <= C x^(beta+1); x >= 1: inner integral <= total^2 (t_max + 1/2) / x^2
    tails = (ExpTail(C, beta + 1.0), ExpTail(0.5 * C * total**2 * (t_max + 0.5), 1.0 - beta))
    return integrate_adaptive(
        outer,
        sorted({-math.log(t) for t in times}),
        cfg,
        tail=tails,
        scale=1.0,
        layer="outer",
    )


def zbeta_exponent(beta: float, C: float, q, cfg: QuadratureConfig | None = None) -> float:
    """Exponent of ``(Z_beta(t_1), ..., Z_beta(t_k))``:

    ``-C ∫_0^inf (exp(-½ ∫ (sum_j theta_j (F(x, t_j - s) - F(x, -s)))^2 ds) - 1) x^beta dx``

    with ``F`` = :func:`zbeta_aux`.  The outer integral runs over ``y = log x``.
    """
    return _zbeta(beta, C, ExponentQuery.of(q), cfg).value


def wiener_exponent(q) -> float:
    """``½ sum_{j,l} min(t_j, t_l) theta_j theta_l``."""
    q = ExponentQuery.of(q)
    _require_nonnegative(q)
    t = np.array(q.times)
    th = np.array(q.thetas)
    return float(0.5 * th @ np.minimum.outer(t, t) @ th)


class ExponentOracle(abc.ABC):
    """A deterministic evaluator of ``psi_{t_1..t_k}(theta_1..theta_k)``."""

    # "real", "nonnegative" or "positive"
    time_domain: str = "real"

    @abc.abstractmethod
    def evaluate(self, times: Sequence[float], thetas: Sequence[float]) -> tuple[float, float]:
        """Return ``(value, error_estimate)``."""

    def __call__(self, times, thetas) -> float:
        return self.evaluate(times, thetas)[0]

    @abc.abstractmethod
    def describe(self) -> dict: ...


class LevyOracle(ExponentOracle):
    time_domain = "positive"

    def __init__(self, model: lm.LevyModel):
        self.model = model

    def evaluate(self, times, thetas):
        return lm.levy_multi_exponent(self.model, times, thetas), 0.0

    def describe(self):
        return {"type": "levy", "model": self.model.to_dict()}


class StableLevyOracle(ExponentOracle):
    """Symmetric ``1/H``-stable Lévy process, ``psi_t(theta) = scale t |theta|^(1/H)``."""

    time_domain = "positive"

    def __init__(self, hurst: float, scale: float = 1.0):
        if hurst < 0.5:
            raise ValueError("hurst must be >= 1/2")
        self.hurst = float(hurst)
        self.scale = float(scale)

    def evaluate(self, times, thetas):
        return lm.stable_multi_exponent(self.hurst, self.scale, times, thetas), 0.0

    def describe(self):
        return {"type": "stable_levy", "H": self.hurst, "scale": self.scale}


class GFLPOracle(ExponentOracle):
    def __init__(self, model: lm.LevyModel, kernel: Kernel, cfg: QuadratureConfig | None = None):
        self.model = model
        self.kernel = kernel
        self.cfg = cfg or QuadratureConfig()
        self.time_domain = kernel.time_domain

    def evaluate(self, times, thetas):
        r = _gflp(self.model, self.kernel, ExponentQuery(times, thetas), self.cfg)
        return r.value, r.error

    def describe(self):
        return {
            "type": "gflp",
            "model": self.model.to_dict(),
            "kernel": self.kernel.to_dict(),
            "quadrature": self.cfg.to_dict(),
        }


class StableIntegralOracle(ExponentOracle):
    def __init__(self, kernel: Kernel, stable_index: float, sigma: float = 1.0, cfg: QuadratureConfig | None = None):
        self.kernel = kernel
        self.stable_index = float(stable_index)
        self.sigma = float(sigma)
        self.cfg = cfg or QuadratureConfig()
        self.time_domain = kernel.time_domain

    def evaluate(self, times, thetas):
        r = _stable(self.kernel, self.stable_index, self.sigma, ExponentQuery(times, thetas), self.cfg)
        return r.value, r.error

    def describe(self):
        return {
            "type": "stable_integral",
            "kernel": self.kernel.to_dict(),
            "stable_index": self.stable_index,
            "sigma": self.sigma,
            "quadrature": self.cfg.to_dict(),
        }


class ZBetaOracle(ExponentOracle):
    time_domain = "nonnegative"

    def __init__(self, beta: float, C: float = 1.0, cfg: QuadratureConfig | None = None):
        self.beta = float(beta)
        self.C = float(C)
        self.cfg = cfg or QuadratureConfig()

    def evaluate(self, times, thetas):
        r = _zbeta(self.beta, self.C, ExponentQuery(times, thetas), self.cfg)
        return r.value, r.error

    def describe(self):
        return {"type": "zbeta", "beta": self.beta, "C": self.C, "quadrature": self.cfg.to_dict()}


class WienerOracle(ExponentOracle):
    time_domain = "nonnegative"

    def evaluate(self, times, thetas):
        return wiener_exponent((times, thetas)), 0.0

    def describe(self):
        return {"type": "wiener"}


def oracle_from_dict(spec: dict) -> ExponentOracle:
    """Build an oracle from ``{"type": ..., ...}``.

    Types: ``levy`` (model), ``stable_levy`` (H, scale), ``gflp`` (model,
    kernel), ``stable_integral`` (kernel, stable_index, sigma), ``zbeta``
    (beta, C) and ``wiener``.  An optional ``quadrature`` record configures
    the quadrature-backed ones.
    """
    from .kernels import kernel_from_dict

    kind = spec.get("type")
    cfg = QuadratureConfig.from_dict(spec["quadrature"]) if "quadrature" in spec else None
    if kind == "levy":
        return LevyOracle(lm.LevyModel.from_dict(spec["model"]))
    if kind == "stable_levy":
        return StableLevyOracle(float(spec["H"]), float(spec.get("scale", 1.0)))
    if kind == "gflp":
        return GFLPOracle(lm.LevyModel.from_dict(spec["model"]), kernel_from_dict(spec["kernel"]), cfg)
    if kind == "stable_integral":
        return StableIntegralOracle(
            kernel_from_dict(spec["kernel"]), float(spec["stable_index"]), float(spec.get("sigma", 1.0)), cfg
        )
    if kind == "zbeta":
        return ZBetaOracle(float(spec["beta"]), float(spec.get("C", 1.0)), cfg)
    if kind == "wiener":
        return WienerOracle()
    raise ValueError(f"unknown oracle type {kind!r}")

"""Globally adaptive Gauss–Kronrod (G10/K21) quadrature on the real line.

Infinite ranges are truncated at a radius chosen from a caller-supplied tail
bound, and the bound is added to the reported error so the estimate covers
truncation bias as well as panel error.  Panels are refined in vectorized
batches; panel sums are always taken in left-to-right order, so results are
bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple, Protocol, Sequence

import numpy as np

__all__ = [
    "QuadratureConfig",
    "QuadResult",
    "NonConvergence",
    "Divergence",
    "PowerTail",
    "ExpTail",
    "integrate_adaptive",
]

# QUADPACK qk21 abscissae (non-negative half) and weights.
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208292238457,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

# Full 21-point rule on [-1, 1], ascending.
NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_g = np.zeros(11)
_g[1::2] = _WG
GAUSS_WEIGHTS = np.concatenate([_g[:-1], _g[::-1]])

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_subdivisions: int = 10_000
    # multiplier on the analytic tail mass when choosing a truncation radius
    truncation_safety: float = 10.0

    def __post_init__(self):
        if not (0 < self.rel_tol < 1):
            raise ValueError("rel_tol must lie in (0, 1)")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if not self.max_subdivisions > 0:
            raise ValueError("max_subdivisions must be positive")
        if not self.truncation_safety > 0:
            raise ValueError("truncation_safety must be positive")

    @classmethod
    def from_dict(cls, spec: dict | None) -> "QuadratureConfig":
        spec = dict(spec or {})
        unknown = set(spec) - {"rel_tol", "abs_tol", "max_subdivisions", "truncation_safety"}
        if unknown:
            raise ValueError(f"unknown quadrature fields: {sorted(unknown)}")
        if "max_subdivisions" in spec:
            spec["max_subdivisions"] = int(spec["max_subdivisions"])
        return cls(**spec)

    def to_dict(self) -> dict:
        return {
            "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol,
            "max_subdivisions": self.max_subdivisions,
            "truncation_safety": self.truncation_safety,
        }

    def scaled(self, factor: float) -> "QuadratureConfig":
        """Same budget, both tolerances multiplied by ``factor``."""
        return replace(self, rel_tol=self.rel_tol * factor, abs_tol=self.abs_tol * factor)


class QuadResult(NamedTuple):
    value: float
    error: float
    subdivisions: int


class NonConvergence(RuntimeError):
    """Subdivision budget exhausted; carries the best estimate and its error."""

    def __init__(self, message: str, value: float, error: float, layer: str | None = None):
        if layer:
            message = f"[{layer}] {message}"
        super().__init__(message)
        self.value = value
        self.error = error
        self.layer = layer


class Divergence(ValueError):
    """The integrand's tail is not integrable."""


class TailBound(Protocol):
    def mass(self, radius: float) -> float:
        """Upper bound on ``∫ |fn|`` beyond ``radius`` on one side."""


@dataclass(frozen=True)
class PowerTail:
    """Envelope ``|fn(u)| <= coef |u|^-power`` for ``|u| >= start``."""

    coef: float
    power: float
    start: float = 1.0

    def __post_init__(self):
        if self.coef > 0 and self.power <= 1:
            raise Divergence(f"tail envelope |u|^-{self.power} is not integrable")

    def mass(self, radius: float) -> float:
        if self.coef == 0:
            return 0.0
        if radius < self.start:
            return math.inf
        return self.coef * radius ** (1.0 - self.power) / (self.power - 1.0)


@dataclass(frozen=True)
class ExpTail:
    """Envelope ``|fn(u)| <= coef exp(-rate |u|)``."""

    coef: float
    rate: float

    def mass(self, radius: float) -> float:
        if self.coef == 0:
            return 0.0
        return self.coef * math.exp(-self.rate * radius) / self.rate


def _radius(tail: TailBound, start: float, scale: float, cfg: QuadratureConfig) -> float:
    # smallest start + scale*(2^k - 1) with safety * mass <= abs_tol
    budget = cfg.abs_tol / cfg.truncation_safety
    step = scale
    r = start + step
    for _ in range(2000):
        if r > 0 and tail.mass(r) <= budget:
            return r
        step *= 2.0
        r = start + step
        if not math.isfinite(r):
            break
    raise Divergence("no finite truncation radius meets the tail budget")


def _geometric_edges(start: float, stop: float, scale: float) -> list[float]:
    """Edges start, start+s, start+2s, start+4s, ... up to ``stop`` (|stop| > |start|)."""
    sign = 1.0 if stop > start else -1.0
    edges = [start]
    offset = scale
    while True:
        nxt = start + sign * offset
        if sign * (stop - nxt) <= 0.5 * scale:
            break
        edges.append(nxt)
        offset *= 2.0
    edges.append(stop)
    return edges


def _kronrod(fn, a: np.ndarray, b: np.ndarray):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    out = fn(x.ravel())
    if isinstance(out, tuple):
        vals, verr = out
        verr = np.abs(np.asarray(verr, dtype=float)).reshape(x.shape)
    else:
        vals, verr = out, None
    vals = np.asarray(vals, dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(vals)):
        bad = x[~np.isfinite(vals)][:3]
        raise FloatingPointError(f"integrand not finite at {bad.tolist()}")
    k = half * (vals @ KRONROD_WEIGHTS)
    g = half * (vals @ GAUSS_WEIGHTS)
    absh = np.abs(half)
    resabs = absh * (np.abs(vals) @ KRONROD_WEIGHTS)
    resasc = absh * (np.abs(vals - (k / np.where(half == 0, 1.0, 2.0 * half))[:, None]) @ KRONROD_WEIGHTS)
    diff = np.abs(k - g)
    with np.errstate(divide="ignore", invalid="ignore"):
        err = np.where(resasc > 0, resasc * np.minimum(1.0, (200.0 * diff / resasc) ** 1.5), diff)
    err = np.maximum(err, 50.0 * _EPS * resabs)
    if verr is not None:
        err = err + np.abs(half) * (verr @ KRONROD_WEIGHTS)
    return k, err


def integrate_adaptive(
    fn: Callable[[np.ndarray], np.ndarray],
    breakpoints: Sequence[float] = (),
    cfg: QuadratureConfig | None = None,
    *,
    lower: float = -math.inf,
    upper: float = math.inf,
    tail=None,
    scale: float = 1.0,
    layer: str | None = None,
) -> QuadResult:
    """Integrate a vectorized ``fn`` over ``[lower, upper]``.

    ``fn`` maps a 1-d array of abscissae to values, or to ``(values, errors)``
    when the integrand is itself only known approximately; those errors are
    integrated into the panel error.  ``breakpoints`` mark kinks or integrable
    singularities and become panel edges.  For an infinite limit, ``tail``
    gives the integrand envelope (a single bound for both sides, or a
    ``(lower_tail, upper_tail)`` pair); the range is cut where the bound times
    ``cfg.truncation_safety`` falls below ``cfg.abs_tol`` and the remaining mass
    is added to the error.  Without a tail bound the range grows until a
    doubling panel contributes less than the tolerance.  ``scale`` sets the
    width of the first panel beyond the outermost finite point.

    Returns ``QuadResult(value, error, subdivisions)``; raises
    :class:`NonConvergence` when ``cfg.max_subdivisions`` is exhausted.
    """
    cfg = cfg or QuadratureConfig()
    if not upper > lower:
        if upper == lower:
            return QuadResult(0.0, 0.0, 0)
        raise ValueError("upper limit must exceed lower limit")
    if isinstance(tail, tuple):
        lo_tail, hi_tail = tail
    else:
        lo_tail = hi_tail = tail

    pts = sorted({float(p) for p in breakpoints if lower < p < upper})
    finite = [p for p in (lower, upper) if math.isfinite(p)]
    anchors = sorted(set(pts + finite))
    if not anchors:
        anchors = [0.0]
    edges = list(anchors)
    tail_err = 0.0
    grow_lo = grow_hi = False

    if math.isinf(lower):
        if lo_tail is not None:
            r = _radius(lo_tail, -anchors[0], scale, cfg)
            edges = _geometric_edges(anchors[0], -r, scale)[::-1][:-1] + edges
            tail_err += lo_tail.mass(r)
        else:
            grow_lo = True
    if math.isinf(upper):
        if hi_tail is not None:
            r = _radius(hi_tail, anchors[-1], scale, cfg)
            edges = edges[:-1] + _geometric_edges(anchors[-1], r, scale)
            tail_err += hi_tail.mass(r)
        else:
            grow_hi = True

    a = np.array(edges[:-1])
    b = np.array(edges[1:])
    val, err = _kronrod(fn, a, b)

    if grow_lo or grow_hi:
        a, b, val, err, tail_err = _grow(
            fn, a, b, val, err, edges[0], edges[-1], tail_err, grow_lo, grow_hi, scale, cfg
        )

    splits = 0
    while True:
        total = float(np.sum(val))
        target = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        panel_err = float(np.sum(err))
        if panel_err <= target:
            return QuadResult(total, float(panel_err + tail_err), splits)
        # split the largest-error panels that together carry the excess
        order = np.argsort(-err, kind="stable")
        cum = np.cumsum(err[order])
        n_split = int(np.searchsorted(cum, panel_err - 0.5 * target)) + 1
        n_split = min(n_split, order.size, cfg.max_subdivisions - splits)
        chosen = np.sort(order[:n_split])
        mid = 0.5 * (a[chosen] + b[chosen])
        splittable = (mid > a[chosen]) & (mid < b[chosen])
        chosen, mid = chosen[splittable], mid[splittable]
        if n_split <= 0 or chosen.size == 0:
            why = "subdivision budget exhausted" if n_split <= 0 else "panels below floating-point resolution"
            raise NonConvergence(
                f"{why}: value {total:.17g}, error {panel_err:.3g} > target {target:.3g}",
                total, panel_err + tail_err, layer,
            )
        new_a = np.concatenate([a[chosen], mid])
        new_b = np.concatenate([mid, b[chosen]])
        nv, ne = _kronrod(fn, new_a, new_b)
        keep = np.ones(a.size, dtype=bool)
        keep[chosen] = False
        a = np.concatenate([a[keep], new_a])
        b = np.concatenate([b[keep], new_b])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        order = np.argsort(a, kind="stable")
        a, b, val, err = a[order], b[order], val[order], err[order]
        splits += chosen.size


def _grow(fn, a, b, val, err, lo_edge, hi_edge, tail_err, grow_lo, grow_hi, scale, cfg):
    """Append doubling panels outward until one contributes below tolerance."""
    for side in ("lo", "hi"):
        if not (grow_lo if side == "lo" else grow_hi):
            continue
        width = scale
        for _ in range(1100):
            if side == "lo":
                na, nb = np.array([lo_edge - width]), np.array([lo_edge])
                lo_edge = na[0]
            else:
                na, nb = np.array([hi_edge]), np.array([hi_edge + width])
                hi_edge = nb[0]
            v, e = _kronrod(fn, na, nb)
            if side == "lo":
                a, b, val, err = np.r_[na, a], np.r_[nb, b], np.r_[v, val], np.r_[e, err]
            else:
                a, b, val, err = np.r_[a, na], np.r_[b, nb], np.r_[val, v], np.r_[err, e]
            total = abs(float(np.sum(val)))
            if abs(v[0]) + e[0] <= max(cfg.abs_tol, cfg.rel_tol * total) / cfg.truncation_safety:
                # the next doubling panel is unlikely to exceed the last
                tail_err += abs(v[0]) + e[0]
                break
            width *= 2.0
        else:
            raise Divergence("integrand tail did not decay while growing the range")
    return a, b, val, err, tail_err

"""Verification of scaling laws against characteristic-exponent oracles.

Three exponent-level identities are checked on grids:

* dilative stability   ``psi_{T t}(theta) = T^delta psi_t(T^(alpha - delta/2) theta)``
* (f, g)-dilative      ``psi_{T t}(theta) = g(T) psi_t(f(T) theta)``
* aggregate similarity ``m psi_t(theta) = psi_{m^-rho2 t}(m^rho1 theta)``

All of them are exact identities, so a report passes when the worst relative
error ``|lhs - rhs| / max(|lhs|, |rhs|, 1e-12)`` stays below the tolerance.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq, minimize_scalar

from .charexp import ExponentOracle
from .kernels import ScalingLaw
from .quadrature import Divergence, NonConvergence
from .serialize import dumps_json, fmt

__all__ = [
    "PowerLaw",
    "CustomLaw",
    "NAMED_LAWS",
    "GeneralizedScalingLaw",
    "AggregateSimilarityLaw",
    "VerificationReport",
    "expand_theta",
    "verify_dilative_stability",
    "verify_fg_dilative",
    "verify_aggregate_similarity",
    "ds_to_as",
    "as_to_ds",
    "ygamma_law",
    "stable_family_laws",
    "moment_scaling_check",
    "estimate_alpha_from_variance",
    "EstimateConfig",
    "LawEstimate",
    "EstimationError",
    "estimate_law_from_exponent",
    "DEFAULT_T_GRID",
    "DEFAULT_THETA_GRID",
    "DEFAULT_TIMES_GRID",
]

DEFAULT_T_GRID = (0.5, 1.0, 2.0, 5.0)
DEFAULT_THETA_GRID = (0.25, 0.5, 1.0, 2.0)
DEFAULT_TIMES_GRID = ((1.0,), (1.0, 2.0))

REL_FLOOR = 1e-12
# exceptions an oracle may raise at a single grid point
POINT_ERRORS = (ValueError, ArithmeticError, NonConvergence, Divergence)


@dataclass(frozen=True)
class PowerLaw:
    exponent: float

    def __call__(self, T):
        return np.power(T, self.exponent)

    def describe(self) -> dict:
        return {"power": self.exponent}


def _log_h(T):
    return 1.0 + np.abs(np.log(T))


NAMED_LAWS: dict[str, Callable] = {
    # a non-power pair with g f^2 = T
    "log_balanced_f": lambda T: np.sqrt(T / _log_h(T)),
    "log_balanced_g": _log_h,
}


@dataclass(frozen=True)
class CustomLaw:
    """Arbitrary positive scaling function ``T -> fn(T)``."""

    fn: Callable
    name: str = "custom"

    def __call__(self, T):
        return self.fn(T)

    @classmethod
    def named(cls, name: str) -> "CustomLaw":
        if name not in NAMED_LAWS:
            raise ValueError(f"unknown named law {name!r}; choose from {sorted(NAMED_LAWS)}")
        return cls(NAMED_LAWS[name], name)

    def describe(self) -> dict:
        return {"custom": self.name}


def _law_from_dict(spec) -> PowerLaw | CustomLaw:
    if isinstance(spec, (int, float)):
        return PowerLaw(float(spec))
    if "power" in spec:
        return PowerLaw(float(spec["power"]))
    if "custom" in spec:
        return CustomLaw.named(spec["custom"])
    raise ValueError(f"scaling function must be {{'power': x}} or {{'custom': name}}, got {spec!r}")


@dataclass(frozen=True)
class GeneralizedScalingLaw:
    """``(f, g)`` pair of the relation ``psi_{Tt}(theta) = g(T) psi_t(f(T) theta)``."""

    f_law: PowerLaw | CustomLaw
    g_law: PowerLaw | CustomLaw

    def f(self, T: float) -> float:
        return self._positive(self.f_law, T)

    def g(self, T: float) -> float:
        return self._positive(self.g_law, T)

    @staticmethod
    def _positive(law, T):
        v = float(law(T))
        if not (math.isfinite(v) and v > 0):
            raise ValueError(f"scaling function {law.describe()} gave {v!r} at T={T!r}")
        return v

    @classmethod
    def from_dict(cls, spec: dict) -> "GeneralizedScalingLaw":
        return cls(_law_from_dict(spec["f"]), _law_from_dict(spec["g"]))

    def to_dict(self) -> dict:
        return {"f": self.f_law.describe(), "g": self.g_law.describe()}


@dataclass(frozen=True)
class AggregateSimilarityLaw:
    """``(rho1, rho2)``: the sum of ``m`` copies equals ``m^rho1 X(m^-rho2 .)`` in law."""

    rho1: float
    rho2: float

    def __post_init__(self):
        if not (math.isfinite(self.rho1) and math.isfinite(self.rho2)):
            raise ValueError("rho1 and rho2 must be finite")

    def to_dict(self) -> dict:
        return {"rho1": self.rho1, "rho2": self.rho2}


def ds_to_as(law: ScalingLaw) -> AggregateSimilarityLaw:
    """``(alpha, delta) -> (1/2 - alpha/delta, -1/delta)``."""
    if law.delta == 0:
        raise ValueError("delta = 0 is the purely self-similar case, which has no aggregate-similar counterpart")
    return AggregateSimilarityLaw(0.5 - law.alpha / law.delta, -1.0 / law.delta)


def as_to_ds(law: AggregateSimilarityLaw) -> ScalingLaw:
    """``(rho1, rho2) -> (rho1/rho2 - 1/(2 rho2), -1/rho2)``."""
    if law.rho2 == 0:
        raise ValueError("rho2 = 0 has no dilatively stable counterpart")
    return ScalingLaw((law.rho1 - 0.5) / law.rho2, -1.0 / law.rho2)


def ygamma_law(gamma: float) -> AggregateSimilarityLaw:
    """Rigidity index ``1/(gamma - 1)`` used for both ``rho1`` and ``rho2``."""
    if not 1 < gamma < 2:
        raise ValueError("gamma must lie in (1, 2)")
    rho = 1.0 / (gamma - 1.0)
    return AggregateSimilarityLaw(rho, rho)


def stable_family_laws(H: float, atol: float = 1e-12) -> Callable[[ScalingLaw], bool]:
    """Membership test for the line ``delta + (alpha - delta/2)/H = 1``.

    Every point of the line is a valid law for the symmetric ``1/H``-stable
    Lévy process.
    """
    if H < 0.5:
        raise ValueError("H must be >= 1/2")

    def on_line(law: ScalingLaw) -> bool:
        return abs(law.delta + law.space_exponent / H - 1.0) <= atol

    return on_line


def expand_theta(theta, k: int) -> tuple[float, ...]:
    """Thetas for a ``k``-time query.

    A scalar ``c`` becomes ``c * (1, -1/2, 1/3, ...)`` so the coordinates differ
    in size and sign; a sequence is used as given.
    """
    if np.ndim(theta) == 0:
        return tuple(float(theta) * (-1.0) ** j / (j + 1) for j in range(k))
    theta = tuple(float(x) for x in theta)
    if len(theta) != k:
        raise ValueError(f"theta {theta} does not match {k} times")
    return theta


@dataclass
class VerificationReport:
    law: dict
    grid: dict
    points: list[dict]
    max_rel_err: float
    tol: float
    passed: bool
    kind: str = "dilative_stability"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "law": self.law,
            "grid": self.grid,
            "points": self.points,
            "max_rel_err": self.max_rel_err,
            "tol": self.tol,
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return dumps_json(self.to_dict())

    CSV_COLUMNS = ("T", "times", "thetas", "lhs", "rhs", "rel_err", "error")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.CSV_COLUMNS)
        for p in self.points:
            w.writerow([
                fmt(p["T"]),
                " ".join(fmt(t) for t in p["times"]),
                " ".join(fmt(t) for t in p["thetas"]),
                fmt(p["lhs"]),
                fmt(p["rhs"]),
                fmt(p["rel_err"]),
                p.get("error", ""),
            ])
        return buf.getvalue()

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.kind} {json.dumps(self.law)} max_rel_err={self.max_rel_err:.3e} tol={self.tol:g}"


def rel_err(lhs: float, rhs: float) -> float:
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), REL_FLOOR)


def _eval_query(args):
    oracle, times, thetas = args
    try:
        return oracle(list(times), list(thetas)), None
    except POINT_ERRORS as exc:
        return math.nan, f"{type(exc).__name__}: {exc}"


def _evaluate_all(oracle: ExponentOracle, queries: list, workers: int) -> dict:
    """Evaluate distinct queries; result order never depends on ``workers``."""
    unique = list(dict.fromkeys(queries))
    jobs = [(oracle, t, th) for t, th in unique]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_eval_query, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_eval_query(j) for j in jobs]
    return dict(zip(unique, results))


def _key(times, thetas):
    return tuple(float(t) for t in times), tuple(float(x) for x in thetas)


def _run(oracle, cases, kind, law_desc, grid_desc, tol, workers) -> VerificationReport:
    """``cases``: (T, times, thetas, lhs_factor, lhs_query, rhs_factor, rhs_query)."""
    queries = []
    for c in cases:
        queries += [c[4], c[6]]
    values = _evaluate_all(oracle, queries, workers)
    points, worst, ok = [], 0.0, True
    for T, times, thetas, lf, lq, rf, rq in cases:
        (lv, lerr), (rv, rerr) = values[lq], values[rq]
        point = {"T": T, "times": list(times), "thetas": list(thetas)}
        if lerr or rerr:
            point.update(lhs=math.nan, rhs=math.nan, rel_err=math.nan, error=lerr or rerr)
            ok = False
        else:
            lhs, rhs = lf * lv, rf * rv
            e = rel_err(lhs, rhs)
            point.update(lhs=lhs, rhs=rhs, rel_err=e)
            worst = max(worst, e)
        points.append(point)
    if not ok:
        worst = math.nan
    passed = ok and worst <= tol
    return VerificationReport(law_desc, grid_desc, points, worst, tol, passed, kind)


def _grids(times_grid, thetas_grid, T_grid):
    times_grid = [tuple(map(float, np.atleast_1d(t))) for t in (times_grid or DEFAULT_TIMES_GRID)]
    thetas_grid = list(thetas_grid or DEFAULT_THETA_GRID)
    T_grid = [float(T) for T in (T_grid or DEFAULT_T_GRID)]
    if not (times_grid and thetas_grid and T_grid):
        raise ValueError("grids must be nonempty")
    if any(T <= 0 for T in T_grid):
        raise ValueError("scale factors must be positive")
    desc = {
        "times": [list(t) for t in times_grid],
        "thetas": [th if np.ndim(th) == 0 else list(th) for th in thetas_grid],
        "T": T_grid,
    }
    return times_grid, thetas_grid, T_grid, desc


def _scaled_cases(times_grid, thetas_grid, T_grid, time_scale, space_scale, factor):
    """Cases for ``psi_{s(T) t}(theta) = factor(T) psi_t(c(T) theta)``."""
    cases = []
    for T in T_grid:
        ts, cs, g = time_scale(T), space_scale(T), factor(T)
        for times in times_grid:
            for th in thetas_grid:
                thetas = expand_theta(th, len(times))
                lq = _key([ts * t for t in times], thetas)
                rq = _key(times, [cs * x for x in thetas])
                cases.append((T, times, thetas, 1.0, lq, g, rq))
    return cases


def verify_dilative_stability(
    oracle: ExponentOracle,
    law: ScalingLaw,
    times_grid=None,
    thetas_grid=None,
    T_grid=None,
    tol: float = 1e-3,
    workers: int = 1,
) -> VerificationReport:
    """Check ``psi_{T t}(theta) = T^delta psi_t(T^(alpha - delta/2) theta)`` on the grid.

    Scalar entries of ``thetas_grid`` are expanded with :func:`expand_theta`.
    """
    times_grid, thetas_grid, T_grid, desc = _grids(times_grid, thetas_grid, T_grid)
    a, d = law.space_exponent, law.delta
    cases = _scaled_cases(times_grid, thetas_grid, T_grid, lambda T: T, lambda T: T**a, lambda T: T**d)
    return _run(oracle, cases, "dilative_stability", law.to_dict(), desc, tol, workers)


def verify_fg_dilative(
    oracle: ExponentOracle,
    law: GeneralizedScalingLaw,
    times_grid=None,
    thetas_grid=None,
    T_grid=None,
    tol: float = 1e-3,
    workers: int = 1,
) -> VerificationReport:
    """Check ``psi_{T t}(theta) = g(T) psi_t(f(T) theta)`` on the grid."""
    times_grid, thetas_grid, T_grid, desc = _grids(times_grid, thetas_grid, T_grid)
    cases = _scaled_cases(times_grid, thetas_grid, T_grid, lambda T: T, law.f, law.g)
    return _run(oracle, cases, "fg_dilative", law.to_dict(), desc, tol, workers)


def verify_aggregate_similarity(
    oracle: ExponentOracle,
    law: AggregateSimilarityLaw,
    m_list: Sequence[int] = (2, 3, 4),
    times_grid=None,
    thetas_grid=None,
    tol: float = 1e-3,
    workers: int = 1,
) -> VerificationReport:
    """Check ``m psi_t(theta) = psi_{m^-rho2 t}(m^rho1 theta)``; the ``T`` column holds ``m``."""
    m_list = [int(m) for m in m_list]
    if not m_list or any(m < 1 for m in m_list):
        raise ValueError("m_list must be nonempty positive integers")
    times_grid, thetas_grid, _, desc = _grids(times_grid, thetas_grid, [1.0])
    desc.pop("T")
    desc["m"] = m_list
    r1, r2 = law.rho1, law.rho2
    cases = []
    for m in m_list:
        for times in times_grid:
            for th in thetas_grid:
                thetas = expand_theta(th, len(times))
                lq = _key(times, thetas)
                rq = _key([m ** (-r2) * t for t in times], [m**r1 * x for x in thetas])
                cases.append((float(m), times, thetas, float(m), lq, 1.0, rq))
    return _run(oracle, cases, "aggregate_similarity", law.to_dict(), desc, tol, workers)


def moment_scaling_check(
    mean_fn: Callable[[float], float] | None,
    var_fn: Callable[[float], float],
    law: ScalingLaw,
    t_grid: Iterable[float] = (1.0,),
    T_grid: Iterable[float] = (2.0, 4.0),
    tol: float = 1e-3,
    mean_floor: float = 1e-12,
) -> VerificationReport:
    """Check ``Var X_{Tt} = T^(2 alpha) Var X_t`` and ``E X_{Tt} = T^(alpha + delta/2) E X_t``.

    The mean leg of a point is vacuous (recorded with zero error) when both
    means are below ``mean_floor``.  Points carry a ``leg`` field.
    """
    t_grid, T_grid = list(t_grid), list(T_grid)
    if not (t_grid and T_grid):
        raise ValueError("grids must be nonempty")
    points, worst, ok = [], 0.0, True

    def add(leg, T, t, f, power):
        nonlocal worst, ok
        point = {"T": T, "times": [t], "thetas": [], "leg": leg}
        try:
            a, b = f(T * t), f(t)
            if leg == "variance" and not b > 0:
                raise ValueError(f"variance at t={t} is not positive")
        except POINT_ERRORS as exc:
            point.update(lhs=math.nan, rhs=math.nan, rel_err=math.nan, error=f"{type(exc).__name__}: {exc}")
            ok = False
            points.append(point)
            return
        lhs, rhs = a, T**power * b
        if leg == "mean" and abs(a) < mean_floor and abs(b) < mean_floor:
            e = 0.0
        else:
            e = rel_err(lhs, rhs)
        worst = max(worst, e)
        point.update(lhs=lhs, rhs=rhs, rel_err=e)
        points.append(point)

    for T in T_grid:
        for t in t_grid:
            add("variance", T, t, var_fn, 2 * law.alpha)
            if mean_fn is not None:
                add("mean", T, t, mean_fn, law.alpha + law.delta / 2)
    if not ok:
        worst = math.nan
    grid = {"times": [[t] for t in t_grid], "T": T_grid}
    return VerificationReport(law.to_dict(), grid, points, worst, tol, ok and worst <= tol, "moment_scaling")


def estimate_alpha_from_variance(var_samples) -> tuple[float, float]:
    """Weighted least-squares slope of ``log var`` on ``log T``, halved.

    ``var_samples`` holds ``(T, var, stderr)`` triples.  Weights are
    ``(var/stderr)^2``; when any stderr is zero the fit is unweighted and the
    standard error comes from the residuals.
    """
    arr = np.asarray(var_samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] < 2:
        raise ValueError("need at least two (T, var, stderr) triples")
    T, var, se = arr.T
    if np.any(T <= 0) or np.any(var <= 0):
        raise ValueError("T and variances must be positive")
    x, y = np.log(T), np.log(var)
    if np.ptp(x) == 0:
        raise ValueError("degenerate design: all T equal")
    weighted = bool(np.all(se > 0))
    w = (var / se) ** 2 if weighted else np.ones_like(x)
    X = np.column_stack([np.ones_like(x), x])
    XtW = X.T * w
    cov = np.linalg.inv(XtW @ X)
    beta = cov @ (XtW @ y)
    if weighted:
        slope_se = math.sqrt(cov[1, 1])
    else:
        dof = len(x) - 2
        s2 = float(np.sum((y - X @ beta) ** 2) / dof) if dof > 0 else 0.0
        slope_se = math.sqrt(s2 * cov[1, 1])
    return float(beta[1] / 2), slope_se / 2


class EstimationError(RuntimeError):
    pass


@dataclass(frozen=True)
class EstimateConfig:
    """Probe design for :func:`estimate_law_from_exponent`."""

    time: float = 1.0
    probe_T: tuple[float, ...] = (0.5, 2.0, 4.0)
    probe_theta: tuple[float, ...] = (0.25, 1.0, 4.0)
    theta_range: tuple[float, float] = (1e-2, 1e2)
    n_grid: int = 33
    delta_range: tuple[float, float] = (-3.0, 3.0)
    n_scan: int = 25
    xtol: float = 1e-8
    flat_tol: float = 1e-10

    def __post_init__(self):
        if self.n_grid < 4 or self.n_scan < 3:
            raise ValueError("n_grid >= 4 and n_scan >= 3 required")
        if self.time <= 0 or min(self.probe_T) <= 0 or min(self.probe_theta) <= 0:
            raise ValueError("probe times, scales and thetas must be positive")
        if not 0 < self.theta_range[0] < self.theta_range[1]:
            raise ValueError("theta_range must be an increasing positive pair")

    @classmethod
    def from_dict(cls, spec: dict) -> "EstimateConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(spec) - known
        if extra:
            raise ValueError(f"unknown estimate options {sorted(extra)}")
        kw = {k: tuple(v) if isinstance(v, list) else v for k, v in spec.items()}
        return cls(**kw)


@dataclass
class LawEstimate:
    law: ScalingLaw
    residual: float
    flat: bool = False
    flat_direction: tuple[float, float] | None = None
    scan: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "alpha_hat": self.law.alpha,
            "delta_hat": self.law.delta,
            "residual": self.residual,
            "flat": self.flat,
        }
        if self.flat_direction is not None:
            out["flat_direction"] = list(self.flat_direction)
        return out


class _LogProfile:
    """``s -> log psi_t(exp(s))`` by cubic spline, linearly extended past the grid."""

    def __init__(self, oracle, t, lo, hi, n):
        self.s = np.linspace(math.log(lo), math.log(hi), n)
        vals = np.array([oracle([t], [math.exp(s)]) for s in self.s])
        if np.any(~np.isfinite(vals)) or np.any(vals <= 0):
            raise EstimationError("oracle must be positive on the probe range")
        self.y = np.log(vals)
        if np.any(np.diff(self.y) <= 0):
            raise EstimationError("oracle exponent must increase in |theta| on the probe range")
        self.spline = CubicSpline(self.s, self.y)
        self.lo_slope = float(self.spline(self.s[0], 1))
        self.hi_slope = float(self.spline(self.s[-1], 1))

    def __call__(self, s: float) -> float:
        if s < self.s[0]:
            return self.y[0] + self.lo_slope * (s - self.s[0])
        if s > self.s[-1]:
            return self.y[-1] + self.hi_slope * (s - self.s[-1])
        return float(self.spline(s))

    def inverse(self, y: float) -> float:
        span = (self.s[-1] - self.s[0]) * 20 + 100
        return brentq(lambda s: self(s) - y, self.s[0] - span, self.s[-1] + span, xtol=1e-14)


def estimate_law_from_exponent(oracle: ExponentOracle, search_cfg: EstimateConfig | None = None) -> LawEstimate:
    """Fit ``(alpha, delta)`` to ``psi_{T t}(theta) = T^delta psi_t(T^(alpha - delta/2) theta)``.

    ``psi_t`` is tabulated on a log-theta grid at ``t = cfg.time``.  For a trial
    ``delta`` each probe ``(T, theta)`` is solved for the space exponent, the
    probe values are averaged, and the squared log-residuals are summed.  A
    coarse scan over ``delta`` brackets the minimum and a golden-section search
    refines it.  When the residual is flat over the whole scan, the law is not
    identifiable and the direction of the valid line is reported.
    """
    cfg = search_cfg or EstimateConfig()
    t = cfg.time
    profile = _LogProfile(oracle, t, *cfg.theta_range, cfg.n_grid)
    probes = []
    for T in cfg.probe_T:
        if T == 1:
            continue
        for th in cfg.probe_theta:
            v = oracle([T * t], [th])
            if not (math.isfinite(v) and v > 0):
                raise EstimationError(f"oracle not positive at T={T}, theta={th}")
            probes.append((math.log(T), math.log(th), math.log(v)))
    if not probes:
        raise EstimationError("need at least one probe scale T != 1")

    def space_exponent(delta: float) -> float:
        return float(np.mean([(profile.inverse(lv - delta * lT) - lth) / lT for lT, lth, lv in probes]))

    def residual(delta: float) -> float:
        try:
            a = space_exponent(delta)
        except ValueError:
            # no space exponent reproduces some probe (e.g. a bounded exponent)
            return math.inf
        return float(sum((profile(lth + a * lT) + delta * lT - lv) ** 2 for lT, lth, lv in probes))

    deltas = np.linspace(*cfg.delta_range, cfg.n_scan)
    scan = [residual(d) for d in deltas]
    if not np.isfinite(min(scan)):
        raise EstimationError("no trial delta reproduces the probes")
    i = int(np.argmin(scan))
    flat = max(scan) <= cfg.flat_tol
    if flat:
        # any point of the line is valid; report the one closest to self-similarity
        delta = float(deltas[np.argmin(np.abs(deltas))])
    else:
        if i in (0, len(deltas) - 1):
            raise EstimationError(f"residual minimum at the edge of delta_range {cfg.delta_range}")
        bracket = (deltas[i - 1], deltas[i], deltas[i + 1])
        try:
            res = minimize_scalar(residual, bracket=bracket, method="golden", options={"xtol": cfg.xtol})
        except ValueError as exc:
            raise EstimationError(f"search did not converge: {exc}") from None
        if not res.success:
            raise EstimationError(f"search did not converge: {res.message}")
        delta = float(res.x) if res.fun <= scan[i] else float(deltas[i])
    a = space_exponent(delta)
    law = ScalingLaw(a + delta / 2, delta)
    direction = None
    if flat:
        h = 0.5
        slope = (space_exponent(delta + h) - space_exponent(delta - h)) / (2 * h) + 0.5
        norm = math.hypot(slope, 1.0)
        direction = (slope / norm, 1.0 / norm)
    # report the residual of the fitted law against the oracle itself, not the spline
    exact = 0.0
    for lT, lth, lv in probes:
        rhs = oracle([t], [math.exp(lth + a * lT)])
        exact += (math.log(rhs) + delta * lT - lv) ** 2
    scan_rows = [[float(d), float(r)] for d, r in zip(deltas, scan)]
    return LawEstimate(law, exact, flat, direction, scan_rows)

"""Seeded Monte Carlo for generalized fractional Lévy processes.

A path is ``S_t = sum_k f(t, tau_k) J_k`` over the jumps ``(tau_k, J_k)`` of the
compound-Poisson driver restricted to a window ``[-U, U]`` (``[0, U]`` for
half-line kernels).  This is exact in law for the truncated driver; the only
bias is the missing tail, whose variance ``m2 ∫_{outside} f(t, u)^2 du`` is
computed and reported.

Path ``p`` draws from its own substream ``(seed, p)``, and paths are processed
in fixed chunks, so ensembles are bit-identical for any worker count.
"""

from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import erfc

from . import levy_models as lm
from .charexp import ExponentOracle, ExponentQuery
from .kernels import Kernel, Support, _product_tail, l2_norm_sq
from .quadrature import QuadratureConfig, integrate_adaptive
from .scaling import AggregateSimilarityLaw
from .serialize import dumps_json, fmt

__all__ = [
    "CHUNK",
    "TruncationError",
    "PathEnsemble",
    "truncation_bias",
    "default_radius",
    "simulate_gflp",
    "simulate_aggregate",
    "CFEstimate",
    "empirical_cf",
    "DEFAULT_CF_QUERIES",
    "CFReport",
    "cf_bias_bound",
    "cf_match_test",
    "two_sample_cf_test",
    "aggregate_queries",
    "aggregate_cf_test",
    "analytic_variance",
    "MomentEstimate",
    "ensemble_moments",
]

# paths per work item; fixed so that results never depend on the worker count
CHUNK = 1024


class TruncationError(ValueError):
    """The window is too small: the truncation bias exceeds the allowed share of the variance."""

    def __init__(self, message: str, bias: np.ndarray, variance: np.ndarray):
        super().__init__(message)
        self.bias = bias
        self.variance = variance


def _window(kernel: Kernel, U: float) -> tuple[float, float]:
    return (0.0, U) if kernel.support is Support.POSITIVE_HALFLINE else (-U, U)


def _outside_l2(kernel: Kernel, t: float, U: float, cfg: QuadratureConfig) -> float:
    """``∫ f(t, u)^2 du`` over the complement of the simulation window."""
    tail = _product_tail(kernel, t, t)
    fn = lambda u: kernel.eval(t, u) ** 2  # noqa: E731
    scale = kernel.scale((t,))
    pts = kernel.breakpoints((t,))
    total = integrate_adaptive(fn, [p for p in pts if p > U], cfg, lower=U, tail=tail, scale=scale).value
    if kernel.support is Support.WHOLE_LINE:
        total += integrate_adaptive(fn, [p for p in pts if p < -U], cfg, upper=-U, tail=tail, scale=scale).value
    return total


def truncation_bias(model: lm.LevyModel, kernel: Kernel, times: Sequence[float], U: float, cfg: QuadratureConfig | None = None) -> np.ndarray:
    """Variance lost by truncating the driver to the window, per time."""
    cfg = cfg or QuadratureConfig(rel_tol=1e-6, abs_tol=1e-14)
    m2 = lm.second_moment(model)
    return np.array([m2 * _outside_l2(kernel, float(t), U, cfg) for t in times])


def analytic_variance(model: lm.LevyModel, kernel: Kernel, times: Sequence[float], cfg: QuadratureConfig | None = None) -> np.ndarray:
    m2 = lm.second_moment(model)
    return np.array([m2 * l2_norm_sq(kernel, float(t), cfg) for t in times])


def default_radius(model: lm.LevyModel, kernel: Kernel, times: Sequence[float], target: float = 1e-3) -> float:
    """Smallest ``U = 2^j max(1, 2 max|t|)`` with bias below ``target`` times the variance at every time."""
    var = analytic_variance(model, kernel, times)
    U = max(1.0, 2.0 * max(abs(float(t)) for t in times))
    for _ in range(60):
        if np.all(truncation_bias(model, kernel, times, U) <= target * var):
            return U
        U *= 2.0
    raise TruncationError("no radius below 2^60 meets the bias target", np.array([]), var)


@dataclass
class PathEnsemble:
    times: np.ndarray
    samples: np.ndarray
    seed: int
    truncation_radius: float
    model: dict
    kernel: dict
    window: tuple[float, float]
    bias_bound: np.ndarray
    variance: np.ndarray
    group_size: int = 1
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 2 or self.samples.shape[1] != self.times.size:
            raise ValueError("samples must be n_paths x len(times)")

    @property
    def n_paths(self) -> int:
        return self.samples.shape[0]

    def column(self, t: float) -> int:
        hits = np.flatnonzero(np.isclose(self.times, t, rtol=1e-12, atol=0.0))
        if hits.size == 0:
            raise ValueError(f"time {t} is not in the ensemble times {self.times.tolist()}")
        return int(hits[0])

    def meta(self) -> dict:
        """Everything needed to regenerate the samples; the timestamp sits under ``metadata``."""
        return {
            "seed": self.seed,
            "n_paths": self.n_paths,
            "group_size": self.group_size,
            "times": self.times.tolist(),
            "truncation_radius": self.truncation_radius,
            "window": list(self.window),
            "model": self.model,
            "kernel": self.kernel,
            "bias_bound": self.bias_bound.tolist(),
            "analytic_variance": self.variance.tolist(),
            "metadata": self.metadata,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"t={fmt(t)}" for t in self.times])
        for row in self.samples:
            w.writerow([fmt(x) for x in row])
        return buf.getvalue()

    def save(self, directory: str, stem: str = "ensemble") -> tuple[str, str]:
        os.makedirs(directory, exist_ok=True)
        csv_path = os.path.join(directory, f"{stem}.csv")
        meta_path = os.path.join(directory, f"{stem}.meta.json")
        with open(csv_path, "w") as fh:
            fh.write(self.to_csv())
        with open(meta_path, "w") as fh:
            fh.write(dumps_json(self.meta()))
        return csv_path, meta_path


def _simulate_chunk(args) -> np.ndarray:
    model, kernel, times, lo, hi, seed, start, stop = args
    k = len(times)
    positions, sizes, counts = [], [], np.empty(stop - start, dtype=np.int64)
    for i, p in enumerate(range(start, stop)):
        pos, size = lm.draw_jumps(model, lo, hi, lm.path_rng(seed, p))
        positions.append(pos)
        sizes.append(size)
        counts[i] = pos.size
    out = np.zeros((stop - start, k))
    if counts.sum() == 0:
        return out
    pos = np.concatenate(positions)
    size = np.concatenate(sizes)
    contrib = kernel.eval(np.asarray(times)[:, None], pos[None, :]) * size[None, :]
    nonempty = counts > 0
    offsets = np.concatenate([[0], np.cumsum(counts)[:-1]])[nonempty]
    out[nonempty] = np.add.reduceat(contrib, offsets, axis=1).T
    return out


def _run_paths(model, kernel, times, lo, hi, seed, n_paths, workers) -> np.ndarray:
    jobs = [
        (model, kernel, tuple(times), lo, hi, seed, s, min(s + CHUNK, n_paths))
        for s in range(0, n_paths, CHUNK)
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_simulate_chunk, jobs))
    else:
        parts = [_simulate_chunk(j) for j in jobs]
    return np.concatenate(parts, axis=0)


def _prepare(model, kernel, times, U, max_bias):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a non-empty 1-d sequence")
    for t in times:
        kernel.check_time(float(t))
    if U is None:
        U = default_radius(model, kernel, times)
    U = float(U)
    if not U > 0:
        raise ValueError(f"truncation radius must be positive, got {U}")
    if kernel.support is Support.WHOLE_LINE and U <= np.max(np.abs(times)):
        raise ValueError(f"truncation radius {U} must exceed max |t| = {np.max(np.abs(times))}")
    bias = truncation_bias(model, kernel, times, U)
    var = analytic_variance(model, kernel, times)
    bad = bias > max_bias * var
    if np.any(bad):
        j = int(np.argmax(bias / np.maximum(var, 1e-300)))
        raise TruncationError(
            f"radius U={U:g} too small: variance bias {bias[j]:.4g} at t={times[j]:g} "
            f"exceeds {max_bias:.2%} of the variance {var[j]:.4g}",
            bias,
            var,
        )
    return times, U, bias, var


def simulate_gflp(
    model: lm.LevyModel,
    kernel: Kernel,
    times: Sequence[float],
    n_paths: int,
    U: float | None = None,
    seed: int = 0,
    workers: int = 1,
    max_bias: float = 0.01,
) -> PathEnsemble:
    """Sample ``n_paths`` paths of ``S_t = ∫ f(t, u) L(du)`` at ``times``.

    ``U=None`` picks :func:`default_radius`.  Raises :class:`TruncationError`
    if the bias exceeds ``max_bias`` times the analytic variance at some time.
    """
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    times, U, bias, var = _prepare(model, kernel, times, U, max_bias)
    lo, hi = _window(kernel, U)
    samples = _run_paths(model, kernel, times, lo, hi, seed, n_paths, workers)
    return PathEnsemble(
        times, samples, int(seed), U, model.to_dict(), kernel.to_dict(), (lo, hi), bias, var,
        metadata={"created": time.strftime("%Y-%m-%dT%H:%M:%S")},
    )


def simulate_aggregate(
    model: lm.LevyModel,
    kernel: Kernel,
    m: int,
    times: Sequence[float],
    n_groups: int,
    U: float | None = None,
    seed: int = 0,
    workers: int = 1,
    max_bias: float = 0.01,
) -> PathEnsemble:
    """Sums of ``m`` independent copies: paths ``g m, ..., g m + m - 1`` form group ``g``.

    With ``m = 1`` this reproduces :func:`simulate_gflp` exactly.
    """
    if m < 1 or n_groups < 1:
        raise ValueError("m and n_groups must be >= 1")
    single = simulate_gflp(model, kernel, times, m * n_groups, U, seed, workers, max_bias)
    sums = single.samples.reshape(n_groups, m, -1).sum(axis=1)
    return PathEnsemble(
        single.times, sums, single.seed, single.truncation_radius, single.model, single.kernel,
        single.window, m * single.bias_bound, m * single.variance, m, single.metadata,
    )


class CFEstimate(NamedTuple):
    re: float
    im: float
    stderr: float
    se_re: float
    se_im: float


def empirical_cf(ensemble: PathEnsemble, query) -> CFEstimate:
    """Sample mean of ``exp(i sum_j theta_j S_{t_j})`` with standard errors.

    ``stderr`` is the modulus error ``sqrt((var cos + var sin)/n) <= 1/sqrt(n)``.
    """
    q = ExponentQuery.of(query)
    cols = [ensemble.column(t) for t in q.times]
    x = ensemble.samples[:, cols] @ np.array(q.thetas)
    c, s = np.cos(x), np.sin(x)
    n = len(x)
    ddof = 1 if n > 1 else 0
    vc, vs = float(np.var(c, ddof=ddof)), float(np.var(s, ddof=ddof))
    return CFEstimate(float(np.mean(c)), float(np.mean(s)), math.sqrt((vc + vs) / n), math.sqrt(vc / n), math.sqrt(vs / n))


# default grid for ensembles that contain t = 1 and t = 2
DEFAULT_CF_QUERIES = (
    ((1.0,), (0.5,)),
    ((1.0,), (1.0,)),
    ((2.0,), (0.5,)),
    ((2.0,), (1.0,)),
    ((1.0, 2.0), (0.5, -0.5)),
    ((1.0, 2.0), (1.0, 0.5)),
)


def cf_bias_bound(ensemble: PathEnsemble, query) -> float:
    """Bound on ``|E exp(i theta.S) - E exp(i theta.S_U)|`` from the missing tail.

    ``|1 - exp(-psi_tail)| <= psi_tail <= (1/2)(sum_j |theta_j| sqrt(bias_j))^2``.
    """
    q = ExponentQuery.of(query)
    amp = sum(abs(th) * math.sqrt(ensemble.bias_bound[ensemble.column(t)]) for t, th in zip(q.times, q.thetas))
    return 0.5 * amp * amp


def _z(diff: float, se: float, slack: float) -> float:
    excess = max(abs(diff) - slack, 0.0)
    if excess == 0.0:
        return 0.0
    return math.copysign(excess / se if se > 0 else math.inf, diff)


@dataclass
class CFReport:
    rows: list[dict]
    z_threshold: float
    passed: bool
    note: str
    kind: str = "cf_match"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "z_threshold": self.z_threshold, "pass": self.passed, "note": self.note, "rows": self.rows}

    def to_json(self) -> str:
        return dumps_json(self.to_dict())

    def to_csv(self) -> str:
        buf = io.StringIO()
        if not self.rows:
            return ""
        cols = list(self.rows[0])
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in self.rows:
            w.writerow([" ".join(fmt(x) for x in r[c]) if isinstance(r[c], list) else fmt(r[c]) for c in cols])
        return buf.getvalue()

    @property
    def max_abs_z(self) -> float:
        return max((max(abs(r["z_re"]), abs(r["z_im"])) for r in self.rows), default=0.0)

    def summary(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.kind} max|z|={self.max_abs_z:.3f} threshold={self.z_threshold:g}"


def _note(n_queries: int, z_threshold: float) -> str:
    p = float(erfc(z_threshold / math.sqrt(2.0)))
    family = 1.0 - (1.0 - p) ** (2 * n_queries)
    return f"{n_queries} queries, 2 z-scores each; per-score two-sided level {p:.2e}, family-wise level at most {family:.2e} under normality"


def cf_match_test(ensemble: PathEnsemble, oracle: ExponentOracle, queries=DEFAULT_CF_QUERIES, z_threshold: float = 4.0) -> CFReport:
    """Compare the empirical CF against ``exp(-psi)`` from ``oracle``.

    Each z-score counts only the part of the deviation that exceeds the
    truncation-bias bound.
    """
    rows, ok = [], True
    for query in queries:
        q = ExponentQuery.of(query)
        psi = oracle(list(q.times), list(q.thetas))
        target = math.exp(-psi)
        cf = empirical_cf(ensemble, q)
        bias = cf_bias_bound(ensemble, q)
        z_re = _z(cf.re - target, cf.se_re, bias)
        z_im = _z(cf.im, cf.se_im, bias)
        ok &= abs(z_re) <= z_threshold and abs(z_im) <= z_threshold
        rows.append({
            "times": list(q.times), "thetas": list(q.thetas), "psi": psi, "target": target,
            "re": cf.re, "im": cf.im, "se_re": cf.se_re, "se_im": cf.se_im, "bias": bias,
            "z_re": z_re, "z_im": z_im,
        })
    return CFReport(rows, z_threshold, bool(ok), _note(len(rows), z_threshold))


def two_sample_cf_test(ens_a: PathEnsemble, queries_a, ens_b: PathEnsemble, queries_b, z_threshold: float = 4.0) -> CFReport:
    """Pairwise comparison of CF estimates ``ens_a`` at ``queries_a[i]`` vs ``ens_b`` at ``queries_b[i]``.

    Standard errors are pooled and both truncation-bias bounds are allowed for.
    """
    if len(queries_a) != len(queries_b):
        raise ValueError("query lists must have equal length")
    rows, ok = [], True
    for qa, qb in zip(queries_a, queries_b):
        qa, qb = ExponentQuery.of(qa), ExponentQuery.of(qb)
        a, b = empirical_cf(ens_a, qa), empirical_cf(ens_b, qb)
        bias = cf_bias_bound(ens_a, qa) + cf_bias_bound(ens_b, qb)
        z_re = _z(a.re - b.re, math.hypot(a.se_re, b.se_re), bias)
        z_im = _z(a.im - b.im, math.hypot(a.se_im, b.se_im), bias)
        ok &= abs(z_re) <= z_threshold and abs(z_im) <= z_threshold
        rows.append({
            "times_a": list(qa.times), "thetas_a": list(qa.thetas),
            "times_b": list(qb.times), "thetas_b": list(qb.thetas),
            "re_a": a.re, "im_a": a.im, "re_b": b.re, "im_b": b.im, "bias": bias,
            "z_re": z_re, "z_im": z_im,
        })
    return CFReport(rows, z_threshold, bool(ok), _note(len(rows), z_threshold), "two_sample_cf")


def aggregate_queries(law: AggregateSimilarityLaw, m: int, queries) -> list[tuple]:
    """Map ``(t, theta)`` on the m-sum to ``(m^-rho2 t, m^rho1 theta)`` on a single copy."""
    out = []
    for query in queries:
        q = ExponentQuery.of(query)
        out.append((tuple(m ** (-law.rho2) * t for t in q.times), tuple(m**law.rho1 * th for th in q.thetas)))
    return out


def aggregate_cf_test(sum_ensemble: PathEnsemble, single_ensemble: PathEnsemble, law: AggregateSimilarityLaw, queries, z_threshold: float = 4.0) -> CFReport:
    """Distribution-level check of ``sum of m copies ~ m^rho1 X(m^-rho2 .)``."""
    m = sum_ensemble.group_size
    report = two_sample_cf_test(sum_ensemble, list(queries), single_ensemble, aggregate_queries(law, m, queries), z_threshold)
    report.kind = "aggregate_cf"
    return report


class MomentEstimate(NamedTuple):
    time: float
    mean: float
    var: float
    se_mean: float
    se_var: float


def ensemble_moments(ensemble: PathEnsemble) -> list[MomentEstimate]:
    """Per-time sample mean and unbiased variance with standard errors.

    The variance error uses the fourth central moment:
    ``se^2 = (mu4 - var^2 (n - 3)/(n - 1)) / n``.
    """
    n = ensemble.n_paths
    if n < 2:
        raise ValueError("need at least two paths")
    out = []
    for j, t in enumerate(ensemble.times):
        x = ensemble.samples[:, j]
        mean = float(np.mean(x))
        d = x - mean
        var = float(np.sum(d * d) / (n - 1))
        mu4 = float(np.mean(d**4))
        se_var = math.sqrt(max(mu4 - var * var * (n - 3) / (n - 1), 0.0) / n)
        out.append(MomentEstimate(float(t), mean, var, math.sqrt(var / n), se_var))
    return out

"""Command-line front end.

    dilastab <verify|simulate|estimate> [--config PATH] [--experiment NAME]
             [--workers N] [--seed S] [--out DIR] [--validate]

Exit codes: 0 when everything passes, 1 on a scientific failure (a check or
estimate misses its target), 2 on a usage or configuration error.
Precedence for settings is flag > config file > built-in experiment.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Callable

import numpy as np

from . import experiments
from . import levy_models as lm
from . import montecarlo as mc
from . import scaling as sc
from .charexp import GFLPOracle, oracle_from_dict
from .kernels import ScalingLaw, check_kernel_scaling, kernel_from_dict
from .quadrature import NonConvergence
from .serialize import dumps_json, fmt

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
COMMANDS = ("verify", "simulate", "estimate")


class ConfigError(Exception):
    pass


def _law(spec: dict) -> ScalingLaw:
    return ScalingLaw(float(spec["alpha"]), float(spec["delta"]))


def _expect(check: dict) -> bool:
    expect = check.get("expect", "pass")
    if expect not in ("pass", "fail"):
        raise ConfigError(f"expect must be 'pass' or 'fail', got {expect!r}")
    return expect == "pass"


def _grid_kwargs(grid: dict) -> dict:
    out = {}
    if "times" in grid:
        out["times_grid"] = [tuple(t) if isinstance(t, list) else (t,) for t in grid["times"]]
    if "thetas" in grid:
        out["thetas_grid"] = grid["thetas"]
    if "T" in grid:
        out["T_grid"] = grid["T"]
    return out


def _conversion_report(kind: str, law: dict, points: list[dict], tol: float) -> sc.VerificationReport:
    worst = max((p["rel_err"] for p in points), default=0.0)
    return sc.VerificationReport(law, {"n": len(points)}, points, worst, tol, worst <= tol, kind)


def _roundtrip(n: int, seed: int, tol: float) -> sc.VerificationReport:
    """Conversions in both directions on random laws; errors are absolute."""
    rng = np.random.default_rng(seed)
    points = []
    for _ in range(n):
        a = float(rng.uniform(-2, 2))
        d = float(rng.choice([-1, 1]) * rng.uniform(0.1, 3))
        back = sc.as_to_ds(sc.ds_to_as(ScalingLaw(a, d)))
        r1, r2 = float(rng.uniform(-2, 2)), float(rng.choice([-1, 1]) * rng.uniform(0.1, 3))
        fwd = sc.ds_to_as(sc.as_to_ds(sc.AggregateSimilarityLaw(r1, r2)))
        err = max(abs(back.alpha - a), abs(back.delta - d), abs(fwd.rho1 - r1), abs(fwd.rho2 - r2))
        points.append({"T": 1.0, "times": [], "thetas": [a, d, r1, r2], "lhs": 0.0, "rhs": err, "rel_err": err})
    return _conversion_report("conversion_roundtrip", {"n": n, "seed": seed}, points, tol)


def _ygamma(gammas, tol: float) -> sc.VerificationReport:
    points = []
    for g in gammas:
        law = sc.as_to_ds(sc.ygamma_law(float(g)))
        err = max(abs(law.alpha - (3 - g) / 2), abs(law.delta - (1 - g)))
        points.append({"T": float(g), "times": [], "thetas": [law.alpha, law.delta], "lhs": (3 - g) / 2, "rhs": law.alpha, "rel_err": err})
    return _conversion_report("ygamma_mapping", {"gammas": list(gammas)}, points, tol)


def _kernel_check(oracle_spec: dict, check: dict) -> sc.VerificationReport:
    if oracle_spec.get("type") != "gflp":
        raise ConfigError("kernel checks need a gflp oracle")
    kernel = kernel_from_dict(oracle_spec["kernel"])
    law = _law(check["law"])
    dev = check_kernel_scaling(kernel, law, int(check.get("n_samples", 10000)), int(check.get("seed", 0)))
    tol = float(check.get("tol", 1e-10))
    point = {"T": math.nan, "times": [], "thetas": [], "lhs": 0.0, "rhs": dev, "rel_err": dev}
    return sc.VerificationReport(law.to_dict(), {"kernel": kernel.to_dict()}, [point], dev, tol, dev <= tol, "kernel_scaling")


def _plan_verify(cfg: dict, workers: int) -> list[tuple[dict, Callable[[], sc.VerificationReport]]]:
    """Parse every check up front so configuration errors surface before any work."""
    checks = cfg.get("checks")
    if not checks:
        raise ConfigError("verify needs a non-empty 'checks' list")
    oracle_spec = cfg.get("oracle")
    oracle = oracle_from_dict(oracle_spec) if oracle_spec else None
    grid = _grid_kwargs(cfg.get("grid", {}))
    for times in grid.get("times_grid", sc.DEFAULT_TIMES_GRID):
        for th in grid.get("thetas_grid", sc.DEFAULT_THETA_GRID):
            sc.expand_theta(th, len(times))
    plan = []
    for check in checks:
        kind = check.get("kind")
        tol = float(check.get("tol", 1e-3))
        _expect(check)
        if kind in ("dilative", "fg", "aggregate") and oracle is None:
            raise ConfigError(f"check {kind!r} needs an 'oracle'")
        if kind == "dilative":
            law = _law(check["law"])
            run = lambda law=law, tol=tol: sc.verify_dilative_stability(oracle, law, tol=tol, workers=workers, **grid)
        elif kind == "fg":
            law = sc.GeneralizedScalingLaw.from_dict(check["law"])
            run = lambda law=law, tol=tol: sc.verify_fg_dilative(oracle, law, tol=tol, workers=workers, **grid)
        elif kind == "aggregate":
            if "from_ds" in check:
                law = sc.ds_to_as(_law(check["from_ds"]))
            else:
                law = sc.AggregateSimilarityLaw(float(check["law"]["rho1"]), float(check["law"]["rho2"]))
            m_list = [int(m) for m in check.get("m", [2, 3, 4])]
            agg_grid = {k: v for k, v in grid.items() if k != "T_grid"}
            run = lambda law=law, tol=tol, m_list=m_list: sc.verify_aggregate_similarity(
                oracle, law, m_list, tol=tol, workers=workers, **agg_grid
            )
        elif kind == "kernel":
            _law(check["law"])
            run = lambda check=check: _kernel_check(oracle_spec, check)
        elif kind == "roundtrip":
            run = lambda check=check, tol=tol: _roundtrip(int(check.get("n", 1000)), int(check.get("seed", 0)), tol)
        elif kind == "ygamma":
            gammas = [float(g) for g in check.get("gammas", [1.2, 1.5, 1.8])]
            for g in gammas:
                sc.ygamma_law(g)
            run = lambda gammas=gammas, tol=tol: _ygamma(gammas, tol)
        else:
            raise ConfigError(f"unknown check kind {kind!r}")
        plan.append((check, run))
    return plan


def _write(out_dir: str, name: str, text: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w") as fh:
        fh.write(text)
    return path


def _reports_csv(entries: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check", "kind", "expect", "outcome"] + list(sc.VerificationReport.CSV_COLUMNS))
    for i, e in enumerate(entries):
        rep = e["report"]
        for p in rep["points"]:
            w.writerow([
                i, rep["kind"], e["expect"], e["outcome"],
                fmt(p["T"]),
                " ".join(fmt(x) for x in p["times"]),
                " ".join(fmt(x) for x in p["thetas"]),
                fmt(p["lhs"]), fmt(p["rhs"]), fmt(p["rel_err"]), p.get("error", ""),
            ])
    return buf.getvalue()


def cmd_verify(cfg: dict, args) -> int:
    plan = _plan_verify(cfg, args.workers)
    entries, all_ok = [], True
    for check, run in plan:
        rep = run()
        want_pass = _expect(check)
        ok = rep.passed == want_pass
        # an expected failure must fail by a clear margin, not by an error
        if not want_pass and ok:
            margin = float(check.get("margin", 10.0))
            ok = math.isfinite(rep.max_rel_err) and rep.max_rel_err >= margin * rep.tol
        all_ok &= ok
        outcome = "ok" if ok else "unexpected"
        print(f"{'ok  ' if ok else 'FAIL'} [{'expect ' + check.get('expect', 'pass')}] {rep.summary()}")
        entries.append({"expect": check.get("expect", "pass"), "outcome": outcome, "report": rep.to_dict()})
    doc = {"command": "verify", "experiment": cfg.get("experiment"), "pass": all_ok, "checks": entries}
    _write(args.out, "report.json", dumps_json(doc))
    _write(args.out, "report.csv", _reports_csv(entries))
    return EXIT_OK if all_ok else EXIT_FAIL


def _sim_settings(spec: dict, args) -> dict:
    try:
        model = lm.LevyModel.from_dict(spec["model"])
        kernel = kernel_from_dict(spec["kernel"])
        times = [float(t) for t in spec["times"]]
        n_paths = int(spec["n_paths"])
    except KeyError as exc:
        raise ConfigError(f"simulate config missing {exc}") from None
    seed = args.seed if args.seed is not None else int(spec.get("seed", 0))
    U = spec.get("U")
    return {
        "model": model,
        "kernel": kernel,
        "times": times,
        "n_paths": n_paths,
        "U": None if U is None else float(U),
        "seed": seed,
        "max_bias": float(spec.get("max_bias", 0.01)),
    }


def _default_queries(times) -> list:
    ts = sorted(set(times))
    qs = []
    for t in ts[:2]:
        qs += [((t,), (0.5,)), ((t,), (1.0,))]
    if len(ts) >= 2:
        qs += [((ts[0], ts[1]), (0.5, -0.5)), ((ts[0], ts[1]), (1.0, 0.5))]
    return qs


def _validate(ens: mc.PathEnsemble, s: dict, spec: dict) -> dict:
    queries = spec.get("queries") or _default_queries(ens.times)
    cf = mc.cf_match_test(ens, GFLPOracle(s["model"], s["kernel"]), queries, float(spec.get("z_threshold", 4.0)))
    rows, ok = [], cf.passed
    for mom, bias, var in zip(mc.ensemble_moments(ens), ens.bias_bound, ens.variance):
        var_ok = abs(mom.var - var) <= 3 * mom.se_var + bias
        mean_ok = abs(mom.mean) <= 3 * mom.se_mean
        ok &= var_ok and mean_ok
        rows.append({**mom._asdict(), "analytic_variance": var, "bias_bound": bias, "variance_ok": var_ok, "mean_ok": mean_ok})
    print(f"{'ok  ' if cf.passed else 'FAIL'} {cf.summary()}")
    for r in rows:
        flag = "ok  " if r["variance_ok"] and r["mean_ok"] else "FAIL"
        print(f"{flag} t={r['time']:g} var={r['var']:.6g}±{r['se_var']:.2g} analytic={r['analytic_variance']:.6g} mean={r['mean']:.3g}±{r['se_mean']:.2g}")
    return {"pass": bool(ok), "cf_match": cf.to_dict(), "moments": rows}


def cmd_simulate(cfg: dict, args) -> int:
    spec = cfg.get("simulate")
    if not spec:
        raise ConfigError("simulate needs a 'simulate' record")
    s = _sim_settings(spec, args)
    try:
        ens = mc.simulate_gflp(s["model"], s["kernel"], s["times"], s["n_paths"], s["U"], s["seed"], args.workers, s["max_bias"])
    except mc.TruncationError as exc:
        raise ConfigError(str(exc)) from None
    ens.save(args.out)
    print(f"wrote {ens.n_paths} paths x {len(ens.times)} times to {args.out}")
    if not (args.validate or spec.get("validate")):
        return EXIT_OK
    result = _validate(ens, s, spec)
    _write(args.out, "report.json", dumps_json({"command": "simulate", "experiment": cfg.get("experiment"), **result}))
    return EXIT_OK if result["pass"] else EXIT_FAIL


def _check_expectation(est: dict, expect: dict) -> bool:
    if not expect:
        return True
    if "stable_line" in expect:
        on_line = sc.stable_family_laws(float(expect["stable_line"]), atol=float(expect.get("tol", 1e-6)))
        return est.get("flat", False) and on_line(ScalingLaw(est["alpha_hat"], est["delta_hat"]))
    tol = float(expect.get("tol", 0.05))
    ok = True
    for key in ("alpha", "delta"):
        if key in expect:
            ok &= abs(est[f"{key}_hat"] - float(expect[key])) <= tol
    return ok


def cmd_estimate(cfg: dict, args) -> int:
    spec = cfg.get("estimate")
    if not spec:
        raise ConfigError("estimate needs an 'estimate' record")
    method = spec.get("method", "exponent")
    if method == "exponent":
        oracle = oracle_from_dict(spec["oracle"])
        search = sc.EstimateConfig.from_dict(spec.get("search", {}))
        try:
            est = sc.estimate_law_from_exponent(oracle, search).to_dict()
        except (sc.EstimationError, NonConvergence) as exc:
            print(f"estimation failed: {exc}", file=sys.stderr)
            return EXIT_FAIL
    elif method == "variance":
        s = _sim_settings(spec.get("simulate", {}), args)
        try:
            ens = mc.simulate_gflp(s["model"], s["kernel"], s["times"], s["n_paths"], s["U"], s["seed"], args.workers, s["max_bias"])
        except mc.TruncationError as exc:
            raise ConfigError(str(exc)) from None
        moments = mc.ensemble_moments(ens)
        alpha, se = sc.estimate_alpha_from_variance([(mo.time, mo.var, mo.se_var) for mo in moments])
        est = {"alpha_hat": alpha, "stderr": se, "variances": [mo._asdict() for mo in moments]}
    else:
        raise ConfigError(f"unknown estimate method {method!r}")
    expect = cfg.get("expect", {})
    ok = _check_expectation(est, expect)
    est["expect"] = expect
    est["pass"] = ok
    _write(args.out, "estimate.json", dumps_json(est))
    shown = {k: v for k, v in est.items() if k in ("alpha_hat", "delta_hat", "stderr", "residual", "flat", "flat_direction")}
    print(f"{'ok  ' if ok else 'FAIL'} estimate {json.dumps(shown)}")
    return EXIT_OK if ok else EXIT_FAIL


HANDLERS = {"verify": cmd_verify, "simulate": cmd_simulate, "estimate": cmd_estimate}


def load_config(args) -> dict:
    cfg: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {args.config}: {exc}") from None
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
    name = args.experiment or cfg.get("experiment")
    if name:
        try:
            base = experiments.get(name)
        except KeyError as exc:
            raise ConfigError(exc.args[0]) from None
        cfg = experiments.merge(base, cfg)
        cfg["experiment"] = name
    if not cfg:
        raise ConfigError("give --config and/or --experiment")
    command = cfg.get("command", args.command)
    if command != args.command:
        raise ConfigError(f"config is for '{command}', not '{args.command}'")
    return cfg


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dilastab", description="Verify, simulate and estimate dilatively stable processes.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON experiment file")
    p.add_argument("--experiment", help=f"built-in experiment: {', '.join(sorted(experiments.BUILTIN))}")
    p.add_argument("--workers", type=int, default=1, help="process count; never changes results")
    p.add_argument("--seed", type=int, help="override the Monte Carlo seed")
    p.add_argument("--out", default="dilastab-out", help="output directory")
    p.add_argument("--validate", action="store_true", help="simulate: also run CF and moment checks")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(args)
        return HANDLERS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (KeyError, TypeError, ValueError) as exc:
        # raised while interpreting configuration records
        print(f"config error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

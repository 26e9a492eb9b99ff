"""Built-in experiment configurations, one per worked example.

Each entry is the same JSON-shaped record a ``--config`` file would hold.
A file may name one of these under ``"experiment"`` and override any field.
"""

from __future__ import annotations

import copy

TWO_POINT = {"family": "two_point", "intensity": 1.0, "jump_param": 1.0}
LAPLACE = {"family": "laplace", "intensity": 1.0, "jump_param": 1.0}

_DS_GRID = {"times": [[1.0], [1.0, 2.0]], "thetas": [0.5, 1.0, 2.0], "T": [0.5, 2.0, 5.0]}


def _gflp(kernel: dict, model: dict = TWO_POINT) -> dict:
    return {"type": "gflp", "model": model, "kernel": kernel}


BUILTIN: dict[str, dict] = {
    "levy-halves": {
        "command": "verify",
        "oracle": {"type": "levy", "model": TWO_POINT},
        "grid": {"times": [[1.0], [1.0, 2.0], [0.5, 1.0, 3.0]], "thetas": [0.25, 0.5, 1.0, 2.0], "T": [0.5, 1.0, 2.0, 5.0]},
        "checks": [
            {"kind": "dilative", "law": {"alpha": 0.5, "delta": 1.0}, "tol": 1e-12},
            {"kind": "aggregate", "law": {"rho1": 0.0, "rho2": -1.0}, "m": [2, 3, 4], "tol": 1e-12},
            {"kind": "dilative", "law": {"alpha": 0.6, "delta": 1.0}, "tol": 1e-3, "expect": "fail"},
        ],
    },
    "subfractional-ds": {
        "command": "verify",
        "oracle": _gflp({"name": "sub_fractional", "params": {"H": 0.7}}),
        "grid": _DS_GRID,
        "checks": [
            {"kind": "kernel", "law": {"alpha": 0.7, "delta": 1.0}, "n_samples": 10000, "seed": 1, "tol": 1e-10},
            {"kind": "dilative", "law": {"alpha": 0.7, "delta": 1.0}, "tol": 1e-3},
            {"kind": "aggregate", "from_ds": {"alpha": 0.7, "delta": 1.0}, "m": [2, 3, 4], "tol": 1e-3},
            {"kind": "dilative", "law": {"alpha": 0.8, "delta": 1.0}, "tol": 1e-3, "expect": "fail"},
        ],
    },
    "logfractional-ds": {
        "command": "verify",
        "oracle": _gflp({"name": "log_fractional", "params": {}}),
        "grid": _DS_GRID,
        "checks": [
            {"kind": "kernel", "law": {"alpha": 0.5, "delta": 1.0}, "n_samples": 10000, "seed": 1, "tol": 1e-10},
            {"kind": "dilative", "law": {"alpha": 0.5, "delta": 1.0}, "tol": 1e-3},
            {"kind": "dilative", "law": {"alpha": 0.5, "delta": 0.0}, "tol": 1e-3, "expect": "fail"},
        ],
    },
    "sghir-ds": {
        "command": "verify",
        "oracle": _gflp({"name": "sghir", "params": {"K": 1.0}}),
        "grid": _DS_GRID,
        "checks": [
            {"kind": "kernel", "law": {"alpha": 0.5, "delta": -1.0}, "n_samples": 10000, "seed": 1, "tol": 1e-10},
            {"kind": "dilative", "law": {"alpha": 0.5, "delta": -1.0}, "tol": 1e-3},
            {"kind": "dilative", "law": {"alpha": 0.5, "delta": 1.0}, "tol": 1e-3, "expect": "fail"},
        ],
    },
    "wellbalanced-nonunique": {
        "command": "verify",
        "oracle": {
            "type": "stable_integral",
            "kernel": {"name": "well_balanced", "params": {"H": 0.6, "stable_index": 1.5}},
            "stable_index": 1.5,
            "sigma": 1.0,
        },
        "checks": [
            {"kind": "dilative", "law": {"alpha": 0.6, "delta": 0.0}, "tol": 1e-3},
            {"kind": "dilative", "law": {"alpha": 0.6 - 1 / 1.5 + 0.5, "delta": 1.0}, "tol": 1e-3},
            {"kind": "dilative", "law": {"alpha": 0.6, "delta": 1.0}, "tol": 1e-3, "expect": "fail"},
        ],
    },
    "zbeta-ds": {
        "command": "verify",
        "oracle": {"type": "zbeta", "beta": 0.0, "C": 1.0},
        "grid": {"times": [[1.0], [1.0, 2.0]], "thetas": [0.5, 1.0], "T": [0.5, 2.0]},
        "checks": [
            {"kind": "dilative", "law": {"alpha": 1.0, "delta": -1.0}, "tol": 1e-2},
            {"kind": "dilative", "law": {"alpha": 1.1, "delta": -1.0}, "tol": 1e-2, "expect": "fail"},
        ],
    },
    "wiener-fg": {
        "command": "verify",
        "oracle": {"type": "wiener"},
        "checks": [
            {"kind": "fg", "law": {"f": {"power": 1 / 3}, "g": {"power": 1 / 3}}, "tol": 1e-12},
            {"kind": "fg", "law": {"f": {"custom": "log_balanced_f"}, "g": {"custom": "log_balanced_g"}}, "tol": 1e-12},
            {"kind": "fg", "law": {"f": {"power": 1.0}, "g": {"power": 1.0}}, "tol": 1e-3, "expect": "fail"},
        ],
    },
    "aggsim-roundtrip": {
        "command": "verify",
        "oracle": _gflp({"name": "sub_fractional", "params": {"H": 0.7}}),
        "grid": {"times": [[1.0], [1.0, 2.0]], "thetas": [0.5, 1.0, 2.0]},
        "checks": [
            {"kind": "roundtrip", "n": 1000, "seed": 0, "tol": 1e-14},
            {"kind": "aggregate", "from_ds": {"alpha": 0.7, "delta": 1.0}, "m": [2, 3, 4], "tol": 1e-3},
        ],
    },
    "ygamma-mapping": {
        "command": "verify",
        "checks": [{"kind": "ygamma", "gammas": [1.2, 1.5, 1.8], "tol": 0.0}],
    },
    "subfractional-mc": {
        "command": "simulate",
        "simulate": {
            "model": TWO_POINT,
            "kernel": {"name": "sub_fractional", "params": {"H": 0.75}},
            "times": [1.0, 2.0, 4.0],
            "n_paths": 20000,
            "U": 50.0,
            "seed": 20240601,
        },
    },
    "zbeta-estimate": {
        "command": "estimate",
        "estimate": {"method": "exponent", "oracle": {"type": "zbeta", "beta": 0.0}},
        "expect": {"alpha": 1.0, "delta": -1.0, "tol": 0.05},
    },
    "levy-estimate": {
        "command": "estimate",
        "estimate": {"method": "exponent", "oracle": {"type": "stable_levy", "H": 0.7}},
        "expect": {"stable_line": 0.7},
    },
    "sghir-estimate": {
        "command": "estimate",
        "estimate": {"method": "exponent", "oracle": _gflp({"name": "sghir", "params": {"K": 1.0}}, LAPLACE)},
        "expect": {"alpha": 0.5, "delta": -1.0, "tol": 0.02},
    },
    "subfractional-variance": {
        "command": "estimate",
        "estimate": {
            "method": "variance",
            "simulate": {
                "model": TWO_POINT,
                "kernel": {"name": "sub_fractional", "params": {"H": 0.75}},
                "times": [1.0, 2.0, 4.0],
                "n_paths": 20000,
                "U": 50.0,
                "seed": 20240601,
            },
        },
        "expect": {"alpha": 0.75, "tol": 0.05},
    },
}


def get(name: str) -> dict:
    if name not in BUILTIN:
        raise KeyError(f"unknown experiment {name!r}; available: {', '.join(sorted(BUILTIN))}")
    return copy.deepcopy(BUILTIN[name])


def merge(base: dict, override: dict) -> dict:
    """Recursive dict merge; ``override`` wins, lists are replaced whole."""
    out = copy.deepcopy(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out

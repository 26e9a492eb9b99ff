"""Fit (alpha, delta) from exponent oracles and compare with the known laws.

    python scripts/estimate_laws.py
"""

import time

from dilastab import charexp as ce
from dilastab import kernels as K
from dilastab import levy_models as lm
from dilastab.scaling import estimate_law_from_exponent

LAPLACE = lm.LevyModel.laplace(1.0, 1.0)

CASES = [
    ("stable Levy H=0.7", ce.StableLevyOracle(0.7), "line delta + (alpha - delta/2)/0.7 = 1"),
    ("Laplace Levy", ce.LevyOracle(LAPLACE), "(0.5, 1) or the line for H = 1/2"),
    ("sub_fractional(0.7)", ce.GFLPOracle(LAPLACE, K.sub_fractional(0.7)), "(0.7, 1)"),
    ("log_fractional", ce.GFLPOracle(LAPLACE, K.log_fractional()), "(0.5, 1)"),
    ("sghir(1)", ce.GFLPOracle(LAPLACE, K.sghir(1.0)), "(0.5, -1)"),
    ("Z_beta beta=0", ce.ZBetaOracle(0.0), "(1, -1)"),
    ("Z_beta beta=0.5", ce.ZBetaOracle(0.5), "(0.75, -1.5)"),
]


def main():
    for name, oracle, expected in CASES:
        t0 = time.perf_counter()
        est = estimate_law_from_exponent(oracle)
        flat = f" flat, direction ({est.flat_direction[0]:.3f}, {est.flat_direction[1]:.3f})" if est.flat else ""
        print(
            f"{name:22s} alpha {est.law.alpha:.6f} delta {est.law.delta:+.6f} residual {est.residual:.1e}"
            f"{flat}  expected {expected}  ({time.perf_counter() - t0:.1f} s)",
            flush=True,
        )


if __name__ == "__main__":
    main()

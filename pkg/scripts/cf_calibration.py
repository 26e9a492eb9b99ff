"""Pass rate of cf_match_test for matched ensembles over many seeds.

    python scripts/cf_calibration.py [--seeds 100] [--paths 20000]

Prints the pass count and max|z| quantiles.  One seed takes about 2 s.
"""

import argparse

import numpy as np

from dilastab import charexp as ce
from dilastab import kernels as K
from dilastab import levy_models as lm
from dilastab import montecarlo as mc


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--paths", type=int, default=20_000)
    p.add_argument("--threshold", type=float, default=4.0)
    args = p.parse_args()

    model, kernel = lm.LevyModel.two_point(1.0, 1.0), K.sub_fractional(0.75)
    oracle = ce.GFLPOracle(model, kernel)
    psi = {q: oracle(list(q[0]), list(q[1])) for q in mc.DEFAULT_CF_QUERIES}
    zs, passes = [], 0
    for seed in range(args.seeds):
        ens = mc.simulate_gflp(model, kernel, [1.0, 2.0], args.paths, U=50.0, seed=seed)
        rows = [mc.empirical_cf(ens, q) for q in mc.DEFAULT_CF_QUERIES]
        z = max(
            max(abs(cf.re - np.exp(-psi[q])) / cf.se_re, abs(cf.im) / cf.se_im)
            for q, cf in zip(mc.DEFAULT_CF_QUERIES, rows)
        )
        zs.append(z)
        passes += z <= args.threshold
        print(f"seed {seed:3d}  max|z| {z:.3f}", flush=True)
    q = np.quantile(zs, [0.5, 0.9, 0.99, 1.0])
    print(f"passed {passes}/{args.seeds}; max|z| median {q[0]:.2f}, 90% {q[1]:.2f}, 99% {q[2]:.2f}, max {q[3]:.2f}")


if __name__ == "__main__":
    main()

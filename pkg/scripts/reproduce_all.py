"""Run every built-in experiment through the CLI and tabulate exit codes.

    python scripts/reproduce_all.py [--out runs] [--workers N]
"""

import argparse
import contextlib
import io
import os
import time

from dilastab import cli, experiments


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--out", default="runs")
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args()

    failures = 0
    for name, cfg in experiments.BUILTIN.items():
        argv = [cfg["command"], "--experiment", name, "--out", os.path.join(args.out, name), "--workers", str(args.workers)]
        if cfg["command"] == "simulate":
            argv.append("--validate")
        t0 = time.perf_counter()
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = cli.main(argv)
        failures += code != 0
        print(f"{name:26s} exit {code}  ({time.perf_counter() - t0:5.1f} s)", flush=True)
    print(f"{len(experiments.BUILTIN) - failures}/{len(experiments.BUILTIN)} experiments exited 0")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()

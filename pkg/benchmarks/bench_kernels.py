"""Compare the numba and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--n 2560] [--repeat 200]

Part one times each kernel on both paths in this process. Part two runs a
full IRL1e1 and GIST solve under each backend in a subprocess, since the
backend is fixed at import time by ``IRL1_BACKEND``.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from irl1 import _kernels

SOLVE_SNIPPET = """
import time
from irl1 import InstanceRecipe, LogPenalty, generate_instance, solve, _kernels
_kernels.warmup()
p = generate_instance(InstanceRecipe({m}, {n}, seed=0), LogPenalty(5e-4, 0.5))
p.L
for name in ("irl1e1", "gist"):
    r = solve(p, name)
    print(name, _kernels.BACKEND, f"{{r.wall_time:.3f}}", r.iterations, f"{{r.fval:.10e}}")
"""


def kernel_table(n, repeat):
    rng = np.random.default_rng(0)
    t = rng.standard_normal(n)
    s = rng.uniform(0, 1e-3, n)
    lo, hi = np.full(n, -1.0), np.full(n, 1.0)
    cases = {
        "soft_threshold": lambda impl: impl(t, s, None, None),
        "soft_threshold_box": lambda impl: impl(t, s, lo, hi),
        "log_weights": lambda impl: impl(t, 5e-4, 0.5),
        "log_prox": lambda impl: impl(t, 3.0, 5e-4, 0.5),
    }
    impls = {
        "soft_threshold": ("soft_threshold_box_numpy", "soft_threshold_box_numba"),
        "soft_threshold_box": ("soft_threshold_box_numpy", "soft_threshold_box_numba"),
        "log_weights": ("log_weights_numpy", "log_weights_numba"),
        "log_prox": ("log_prox_numpy", "log_prox_numba"),
    }
    print(f"kernel timings, n = {n}, best of 5 x {repeat} calls (microseconds per call)")
    print(f"{'kernel':<20} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for name, call in cases.items():
        times = []
        for attr in impls[name]:
            impl = getattr(_kernels, attr)
            call(impl)
            best = min(timeit.repeat(lambda: call(impl), number=repeat, repeat=5))
            times.append(best / repeat * 1e6)
        print(f"{name:<20} {times[0]:>10.1f} {times[1]:>10.1f} {times[0] / times[1]:>7.1f}x")


def solver_table(m, n):
    print(f"\nfull solves at {m} x {n}, eps = 0.5 (seconds, iterations, fval)")
    for backend in ("numpy", "numba"):
        env = {**os.environ, "IRL1_BACKEND": backend}
        out = subprocess.run([sys.executable, "-c", SOLVE_SNIPPET.format(m=m, n=n)],
                             env=env, capture_output=True, text=True, check=True)
        print(out.stdout.rstrip())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2560)
    ap.add_argument("--m", type=int, default=720)
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--no-solve", action="store_true")
    args = ap.parse_args()
    if not _kernels.HAS_NUMBA:
        sys.exit("numba is not installed; nothing to compare")
    _kernels.warmup()
    kernel_table(args.n, args.repeat)
    if not args.no_solve:
        solver_table(args.m, args.n)


if __name__ == "__main__":
    main()

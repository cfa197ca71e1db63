#!/usr/bin/env python3
"""Compare the compiled and pure-numpy kernels on identical inputs.

Prints one JSON object with median timings (seconds) and the largest
disagreement between the two paths for every kernel.
"""

import argparse
import json
import statistics
import sys
import time

import numpy as np

from drsub import kernels
from drsub._accel import NUMBA_AVAILABLE
from drsub.rng import make_rng


def timeit(fn, args, runs):
    fn(*args)  # warm-up (and JIT compile)
    times = []
    for _ in range(runs):
        start = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - start)
    return statistics.median(times), out


def multilinear_case(rng, n):
    return rng.standard_normal(1 << n), rng.random(n)


def flid_case(rng, n, d):
    W = rng.random((n, d))
    order = np.ascontiguousarray(np.argsort(W, axis=0, kind="stable").T)
    return W, order, rng.random(n), rng.random(n)


def grid_case(rng, n, resolution, m):
    H = -rng.random((n, n))
    H = (H + H.T) / 2
    h = rng.random(n)
    grid = np.tile(np.linspace(0.0, 1.0, resolution), (n, 1))
    A = rng.random((m, n))
    return H, h, 0.0, grid, A, np.ones(m), 1e-12


def disagreement(a, b):
    if isinstance(a, tuple):
        return max(disagreement(x, y) for x, y in zip(a, b))
    return float(np.max(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mt-n", type=int, default=16, help="ground-set size for the 2^n multilinear sum")
    p.add_argument("--flid-n", type=int, default=2000)
    p.add_argument("--flid-d", type=int, default=20)
    p.add_argument("--grid-n", type=int, default=4)
    p.add_argument("--grid-res", type=int, default=101)
    args = p.parse_args(argv)
    if not NUMBA_AVAILABLE:
        print("numba is not installed; nothing to compare", file=sys.stderr)
        return 1

    rng = make_rng(args.seed)
    cases = {
        "multilinear_sum": (kernels.multilinear_sum_nb, kernels.multilinear_sum_np, multilinear_case(rng, args.mt_n)),
        "flid_value_grad": (kernels.flid_value_grad_nb, kernels.flid_value_grad_np, flid_case(rng, args.flid_n, args.flid_d)),
        "grid_max_quadratic": (
            kernels._grid_quadratic_nb,
            kernels._grid_quadratic_np,
            grid_case(rng, args.grid_n, args.grid_res, 2),
        ),
    }
    results = {}
    for name, (fast, slow, inputs) in cases.items():
        t_nb, out_nb = timeit(fast, inputs, args.runs)
        t_np, out_np = timeit(slow, inputs, args.runs)
        results[name] = {
            "numba_s": t_nb,
            "numpy_s": t_np,
            "speedup": t_np / t_nb if t_nb > 0 else None,
            "max_abs_diff": disagreement(out_nb, out_np),
        }
    print(json.dumps({"runs": args.runs, "seed": args.seed, "kernels": results}, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())

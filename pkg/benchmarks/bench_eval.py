#!/usr/bin/env python3
"""Benchmark: compiled tape kernel vs numpy fallback.

Workload: the Ricci-entry and soliton-residual trees of two catalogue
geometries, evaluated over interior grids of increasing size. These are the
trees every grid sweep in the package evaluates, so the comparison reflects
real usage. Also cross-checks that the two backends agree to round-off.

Usage: python benchmarks/bench_eval.py [--sizes 9,17,33] [--repeat 5]
"""

import argparse
import time

import numpy as np

from diagsol import DiagonalMetric, parse_expr, ricci_frame, unit_box
from diagsol.metric import sample_grid
from diagsol.soliton import residual_equations
from diagsol.solutions import catalogue_entry
from diagsol.tape import compile_tape
from diagsol import _kernels_py

try:
    from diagsol import _kernels
except ImportError:
    _kernels = None


def workload_trees():
    sol3 = DiagonalMetric(parse_expr("exp(-x3)"), parse_expr("exp(x3)"), unit_box())
    trees = []
    ric = ricci_frame(sol3)
    trees += [ric.entry(i, i) for i in (1, 2, 3)]
    mixed = catalogue_entry("x2x3-exp").soliton
    trees += list(residual_equations(mixed).values())
    return trees


def run_backend(impl, tapes, xs, repeat):
    empty = np.empty((0, xs.shape[1]))
    best = float("inf")
    outs = None
    for _ in range(repeat):
        start = time.perf_counter()
        outs = [
            impl.run_tape(t.code, t.consts, xs, empty, t.stack_need)[3] for t in tapes
        ]
        best = min(best, time.perf_counter() - start)
    return best, outs


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="9,17,33")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    trees = workload_trees()
    tapes = [compile_tape(t) for t in trees]
    n_ops = sum(t.code.shape[0] for t in tapes)
    print(f"workload: {len(trees)} trees, {n_ops} tape instructions total")
    if _kernels is None:
        print("compiled kernel not available; timing the numpy fallback only")

    header = f"{'grid':>8} {'points':>8} {'python':>12} {'compiled':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        pts = sample_grid(unit_box(), n)
        xs = np.ascontiguousarray(pts.T)
        t_py, out_py = run_backend(_kernels_py, tapes, xs, args.repeat)
        if _kernels is not None:
            t_c, out_c = run_backend(_kernels, tapes, xs, args.repeat)
            agree = max(
                float(np.abs(a - b).max()) for a, b in zip(out_py, out_c)
            )
            assert agree < 1e-12, f"backend mismatch: {agree}"
            print(
                f"{n:>5}^3 {len(pts):>8} {t_py * 1e3:>10.2f}ms "
                f"{t_c * 1e3:>10.2f}ms {t_py / t_c:>8.1f}x"
            )
        else:
            print(f"{n:>5}^3 {len(pts):>8} {t_py * 1e3:>10.2f}ms {'-':>12} {'-':>9}")
    if _kernels is not None:
        print("backends agree to < 1e-12 on every tree")


if __name__ == "__main__":
    main()

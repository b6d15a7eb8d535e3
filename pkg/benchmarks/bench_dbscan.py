#!/usr/bin/env python3
"""Benchmark the compiled DBSCAN kernel against the pure numpy fallback.

Synthetic blob-plus-background instances at increasing sizes, both kernels
run on identical scaled inputs, labels cross-checked. Usage:

    python benchmarks/bench_dbscan.py [--max-n 200000]
"""

import argparse
import time

import numpy as np

from lociscan.cluster import available_kernels, dbscan, standard_scale


def make_instance(n, rng):
    k = 6
    centers = rng.uniform(-40, 40, (k, 2))
    blob = centers[rng.integers(0, k, int(n * 0.85))] + rng.normal(0, 0.8, (int(n * 0.85), 2))
    background = rng.uniform(-60, 60, (n - blob.shape[0], 2))
    return np.vstack([blob, background])


def time_kernel(scaled, eps, min_pts, kernel):
    repeats = 3 if scaled.n_rows <= 20_000 else 1
    best = float("inf")
    labels = None
    for _ in range(repeats):
        start = time.perf_counter()
        labels = dbscan(scaled, eps, min_pts, kernel=kernel).labels
        best = min(best, time.perf_counter() - start)
    return best, labels


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=200_000)
    parser.add_argument("--eps", type=float, default=0.05)
    parser.add_argument("--min-pts", type=int, default=20)
    args = parser.parse_args()

    kernels = available_kernels()
    print(f"kernels available: {', '.join(kernels)}")
    if "cython" not in kernels:
        print("compiled kernel not built; timing the pure kernel only")

    rng = np.random.default_rng(0)
    sizes = [n for n in (5_000, 20_000, 50_000, 100_000, 200_000) if n <= args.max_n]
    header = f"{'n':>10} {'clusters':>9} {'noise':>9} {'python (s)':>12}"
    if "cython" in kernels:
        header += f" {'cython (s)':>12} {'speedup':>8}"
    print(header)
    for n in sizes:
        scaled = standard_scale(make_instance(n, rng))
        t_py, labels_py = time_kernel(scaled, args.eps, args.min_pts, "python")
        row = (
            f"{n:>10} {int(labels_py.max()) + 1:>9} {(labels_py == -1).sum():>9} "
            f"{t_py:>12.3f}"
        )
        if "cython" in kernels:
            t_cy, labels_cy = time_kernel(scaled, args.eps, args.min_pts, "cython")
            assert np.array_equal(labels_py, labels_cy), "kernels disagree"
            row += f" {t_cy:>12.3f} {t_py / t_cy:>7.1f}x"
        print(row)


if __name__ == "__main__":
    main()

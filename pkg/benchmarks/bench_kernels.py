"""Compare the numba kernels against the pure-numpy fallbacks.

Usage:
    python benchmarks/bench_kernels.py [n_points]

Runs each kernel on identical inputs through both backends, checks the
outputs are bit-identical, and prints per-backend timings. The same
comparison at package level is selected by PLOTWIRE_DISABLE_NUMBA=1.
"""

from __future__ import annotations

import math
import sys
import time

import numpy as np

from plotwire import kernels

W, H = 640, 480


def bench(label, fn, *args, repeat=5):
    fn(*args)  # warmup / JIT
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    print(f"    {label:18s} {best * 1000:8.2f} ms")
    return out


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 1_000_000
    if not kernels.USING_NUMBA:
        print("note: numba backend unavailable or disabled; comparing numpy to itself")
    rng = np.random.default_rng(42)
    gx = rng.uniform(-20, W + 20, n)
    gy = rng.uniform(-20, H + 20, n)
    depth = rng.uniform(-1.7, 1.7, n)
    shade = np.rint(180.0 * (1.0 - (depth + math.sqrt(3)) / (2 * math.sqrt(3))))
    order = np.argsort(depth, kind="stable")
    tnorm = rng.uniform(-0.1, 1.1, n)

    pairs = [
        ("density_grid", (gx, gy, W, H, 1),
         kernels.density_grid_numba if kernels.USING_NUMBA else kernels.density_grid_numpy,
         kernels.density_grid_numpy),
        ("paint_mask", (gx, gy, 2, W, H),
         kernels.paint_mask_numba if kernels.USING_NUMBA else kernels.paint_mask_numpy,
         kernels.paint_mask_numpy),
        ("paint_shaded", (gx, gy, shade, order, 2, W, H),
         kernels.paint_shaded_numba if kernels.USING_NUMBA else kernels.paint_shaded_numpy,
         kernels.paint_shaded_numpy),
        ("hist_counts", (tnorm, 50),
         kernels.hist_counts_numba if kernels.USING_NUMBA else kernels.hist_counts_numpy,
         kernels.hist_counts_numpy),
        ("nearest_point", (gx, gy, W / 2, H / 2, 50.0, W, H),
         kernels.nearest_point_numba if kernels.USING_NUMBA else kernels.nearest_point_numpy,
         kernels.nearest_point_numpy),
    ]

    print(f"kernel benchmark, n = {n:,} points, viewport {W}x{H}")
    for name, args, numba_fn, numpy_fn in pairs:
        print(f"  {name}")
        a = bench("numba" if kernels.USING_NUMBA else "numpy", numba_fn, *args)
        b = bench("numpy fallback", numpy_fn, *args)
        if isinstance(a, tuple):
            match = a == b
        else:
            match = np.array_equal(a, b)
        print(f"    outputs identical: {match}")
        if not match:
            raise SystemExit(f"{name}: backend outputs differ")


if __name__ == "__main__":
    main()

"""Compare the numba kernels with their numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each case is timed after one warm-up call (which also triggers numba
compilation) and reports the best of ``--repeat`` runs.
"""
import argparse
import time

import numpy as np

from harmhull import _kernels, bateman, hull
from harmhull.integrands import builtin
from harmhull.regions import Ball, Complement, Intersection, Region


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases(rng):
    centers = rng.uniform(-2, 2, (8, 4))
    U = Region(4, Intersection(tuple(Complement(Ball(c, 0.4)) for c in centers)))
    Z = rng.uniform(-2, 2, (201 * 201, 4)) + 1j * rng.uniform(-1, 1, (201 * 201, 4))
    x0 = np.array([10.0, 0, 0, 0])
    theta = 2 * np.pi * np.arange(200_001) / 200_000
    rad = 1 + (1j + 0.1 * np.exp(1j * theta)) ** 2
    f = builtin("s2t2_over_zeta")
    gamma = bateman.Contour(0, 1, 4096)
    z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return {
        "hull raster 201x201, 8 balls, 4 segment samples":
            lambda k: hull.hull_codes(Z, U, x0, samples=4, kernels=k),
        "sqrt tracking, 2e5 steps":
            lambda k: k.track_sqrt(rad, np.sqrt(rad[0])),
        "Bateman quadrature, 4096 nodes":
            lambda k: bateman.bateman_eval(f, gamma, z, kernels=k),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels.numba_kernels is None:
        raise SystemExit("numba is not installed")
    rng = np.random.default_rng(0)
    print(f"{'case':<52}{'numpy [s]':>12}{'numba [s]':>12}{'speed-up':>10}")
    for name, run in cases(rng).items():
        t_np = best_of(lambda: run(_kernels.numpy_kernels), args.repeat)
        t_nb = best_of(lambda: run(_kernels.numba_kernels), args.repeat)
        print(f"{name:<52}{t_np:>12.4g}{t_nb:>12.4g}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()

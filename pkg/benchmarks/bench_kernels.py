#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-python fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]

Shapes mirror real workloads: 64-96 quadrature nodes against cycles from
tens of poles (shallow scans) up to tens of thousands (deep branches).
"""

import argparse
import time

import numpy as np

try:
    from markovcycles import _kernels as compiled
except ImportError:
    compiled = None
from markovcycles import _kernels_py as fallback
from markovcycles.modfun import divisor_sums


def timeit(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_pole_sums(repeats):
    rng = np.random.RandomState(0)
    nodes = np.exp(1j * np.linspace(np.pi / 3, 2 * np.pi / 3, 96))
    print("pole_pair_sums (96 nodes)")
    print(f"{'poles':>8} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for n_poles in (32, 256, 2048, 16384, 131072):
        w = rng.uniform(1.0, 4.0, n_poles)
        wt = rng.uniform(0.0, 1.0, n_poles)
        t_py = timeit(fallback.pole_pair_sums, nodes, w, wt, repeats=repeats)
        if compiled is None:
            print(f"{n_poles:>8} {t_py * 1e3:>10.3f}ms {'n/a':>12}")
            continue
        t_c = timeit(compiled.pole_pair_sums, nodes, w, wt, repeats=repeats)
        diff = np.max(
            np.abs(
                compiled.pole_pair_sums(nodes, w, wt) - fallback.pole_pair_sums(nodes, w, wt)
            )
        )
        print(
            f"{n_poles:>8} {t_py * 1e3:>10.3f}ms {t_c * 1e3:>10.3f}ms "
            f"{t_py / t_c:>8.1f}x   (max |diff| {diff:.1e})"
        )


def bench_eisenstein(repeats):
    rng = np.random.RandomState(1)
    s3 = np.array(divisor_sums(3), dtype=float)
    s5 = np.array(divisor_sums(5), dtype=float)
    print("\neisenstein_pair (200 terms)")
    print(f"{'points':>8} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for n_pts in (64, 512, 4096, 32768):
        q = (rng.uniform(-1, 1, n_pts) + 1j * rng.uniform(-1, 1, n_pts)) * 0.004
        t_py = timeit(fallback.eisenstein_pair, q, s3, s5, 200, repeats=repeats)
        if compiled is None:
            print(f"{n_pts:>8} {t_py * 1e3:>10.3f}ms {'n/a':>12}")
            continue
        t_c = timeit(compiled.eisenstein_pair, q, s3, s5, 200, repeats=repeats)
        print(f"{n_pts:>8} {t_py * 1e3:>10.3f}ms {t_c * 1e3:>10.3f}ms {t_py / t_c:>8.1f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    if compiled is None:
        print("compiled extension not available; timing the fallback only\n")
    bench_pole_sums(args.repeats)
    bench_eisenstein(args.repeats)


if __name__ == "__main__":
    main()

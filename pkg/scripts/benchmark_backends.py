#!/usr/bin/env python3
"""Time the numba kernels against the pure-numpy fallback.

Covers the hot kernels in isolation (update rules, DE trials, batch
objectives) and two representative end-to-end runs. The numba path is warmed
up before timing so JIT compilation is not counted.

Usage: python scripts/benchmark_backends.py [--repeats 5]
"""

import argparse
import time

import numpy as np

from salpaudit import backend, config_for, get_objective, run


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def kernel_cases(rng):
    n, d = 50, 10
    lower = np.full(d, -100.0)
    upper = np.full(d, 100.0)
    base = rng.uniform(-100, 100, (25, d))
    c2, c3 = rng.random((25, d)), rng.random((25, d))
    positions = rng.uniform(-100, 100, (n, d))
    idx = np.array([rng.choice([j for j in range(n) if j != i], 3, replace=False)
                    for i in range(n)])
    cross = rng.random((n, d))
    j_rand = rng.integers(0, d, n)
    batch = rng.uniform(-100, 100, (n, d))
    loops = 2000
    return {
        "leader_positions (25x10)": lambda k: [
            k.leader_positions(base, lower, upper, 0.9, c2, c3, 0.5, False)
            for _ in range(loops)
        ],
        "follower_sweep (50x10)": lambda k: [
            k.follower_sweep(positions, 25) for _ in range(loops)
        ],
        "clip_positions (50x10)": lambda k: [
            k.clip_positions(positions, lower, upper) for _ in range(loops)
        ],
        "de_trials (50x10)": lambda k: [
            k.de_trials(positions, idx[:, 0], idx[:, 1], idx[:, 2], 0.3, 0.5,
                        cross, j_rand, lower, upper)
            for _ in range(loops)
        ],
        "sphere_batch (50x10)": lambda k: [k.sphere_batch(batch) for _ in range(loops)],
        "ackley_batch (50x10)": lambda k: [k.ackley_batch(batch) for _ in range(loops)],
        "rastrigin_batch (50x10)": lambda k: [k.rastrigin_batch(batch) for _ in range(loops)],
    }


def run_cases():
    sphere10 = get_objective("sphere", 10, shift=50.0)
    return {
        "asso run (10-D shifted sphere, N=50, L=200)": lambda: run(
            "asso", sphere10, config_for("asso", iterations=200), seed=1
        ),
        "de run (10-D shifted sphere, N=50, L=200)": lambda: run(
            "de", sphere10, config_for("de", iterations=200), seed=1
        ),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if "numba" not in backend.available():
        parser.error("numba is not importable; nothing to compare")

    rng = np.random.default_rng(0)
    cases = kernel_cases(rng)

    # warm the JIT cache
    backend.use("numba")
    for fn in cases.values():
        fn(backend.kernels)
    for fn in run_cases().values():
        fn()

    width = max(len(name) for name in list(cases) + list(run_cases()))
    print(f"{'case':<{width}}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}")
    for name, fn in cases.items():
        times = {}
        for which in ("numpy", "numba"):
            kernels = backend.use(which)
            times[which] = _time(lambda: fn(kernels), args.repeats)
        print(f"{name:<{width}}  {times['numpy'] * 1e3:>8.2f}ms  {times['numba'] * 1e3:>8.2f}ms"
              f"  {times['numpy'] / times['numba']:>7.2f}x")
    for name, fn in run_cases().items():
        times = {}
        for which in ("numpy", "numba"):
            backend.use(which)
            times[which] = _time(fn, args.repeats)
        print(f"{name:<{width}}  {times['numpy'] * 1e3:>8.2f}ms  {times['numba'] * 1e3:>8.2f}ms"
              f"  {times['numpy'] / times['numba']:>7.2f}x")
    backend.use("numba")


if __name__ == "__main__":
    main()

"""Time the numba kernels against the pure-numpy fallbacks.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --chain 50000 --rows 8192 --grid 2000

Each kernel is timed as the best of --repeat runs after one untimed
warmup; for the numba variants the warmup also pays the JIT bill, so the
numbers reflect steady-state throughput.  Without numba installed the
numba column reads n/a.
"""

import argparse
import time

import numpy as np

from slhnet import kernels


def best_of(fn, data, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*data)
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--chain", type=int, default=20000,
                        help="beamsplitters in the chain-fold kernel (default 20000)")
    parser.add_argument("--rows", type=int, default=4096,
                        help="selector rows in the batch kernel (default 4096)")
    parser.add_argument("--length", type=int, default=16,
                        help="memory cells per selector row (default 16)")
    parser.add_argument("--grid", type=int, default=1200,
                        help="points per axis in the phase-grid kernel (default 1200)")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    thetas = rng.uniform(-np.pi, np.pi, size=args.chain)
    phases = rng.uniform(0.0, 2 * np.pi, size=args.chain - 1)
    ports = rng.integers(1, 3, size=args.chain - 1).astype(np.int8)
    mu = rng.uniform(0.0, 2 * np.pi, size=args.length)
    controls = np.pi * rng.integers(0, 2, size=(args.rows, args.length + 1)).astype(np.float64)
    phis = rng.uniform(0.05, np.pi - 0.05, size=args.grid)
    mus = rng.uniform(-np.pi + 0.05, np.pi - 0.05, size=args.grid)

    cases = [
        ("chain_unitary", (thetas, phases, ports)),
        ("selector_batch_amplitudes", (mu, controls)),
        ("weighted_phase_grid", (phis, mus)),
    ]

    print(f"numba available: {kernels.HAVE_NUMBA}   pinned backend: {kernels.BACKEND}")
    print(f"{'kernel':<28} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    for name, data in cases:
        fn_numpy = getattr(kernels, name + "_numpy")
        fn_numpy(*data)
        t_numpy = best_of(fn_numpy, data, args.repeat)
        if kernels.HAVE_NUMBA:
            fn_numba = getattr(kernels, name + "_numba")
            fn_numba(*data)
            t_numba = best_of(fn_numba, data, args.repeat)
            print(f"{name:<28} {t_numpy * 1e3:10.2f}ms {t_numba * 1e3:10.2f}ms "
                  f"{t_numpy / t_numba:8.1f}x")
        else:
            print(f"{name:<28} {t_numpy * 1e3:10.2f}ms {'n/a':>12}")


if __name__ == "__main__":
    main()

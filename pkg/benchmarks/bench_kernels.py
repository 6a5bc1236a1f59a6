"""Benchmark: compiled kernels vs the pure-Python fallback.

Times the two elimination kernels on workloads shaped like the package's
hot paths: many small exact ranks/determinants (the sampling batteries and
the identity-testing loop) and modular rank pre-screens.  Results are
wall-clock; both backends are exercised in the same process.

Usage: python benchmarks/bench_kernels.py [--sizes 6,10,15] [--reps 200]
"""

from __future__ import annotations

import argparse
import random
import time

from terracini._kernels import pykernels

try:
    from terracini._kernels import fastkernels
except ImportError:
    fastkernels = None

PRIME = (1 << 31) - 1


def make_matrices(rng: random.Random, size: int, count: int, hi: int):
    return [[[rng.randint(-hi, hi) for _ in range(size)] for _ in range(size)]
            for _ in range(count)]


def time_backend(kernel, matrices, reps_label: str):
    t0 = time.perf_counter()
    acc = 0
    for m in matrices:
        _, pivots, _ = kernel.bareiss_echelon(m)
        acc += len(pivots)
    t_bareiss = time.perf_counter() - t0
    t0 = time.perf_counter()
    for m in matrices:
        acc += kernel.mod_rank(m, PRIME)
    t_mod = time.perf_counter() - t0
    return t_bareiss, t_mod, acc


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="6,10,15",
                        help="comma-separated matrix sizes")
    parser.add_argument("--reps", type=int, default=200,
                        help="matrices per size")
    parser.add_argument("--hi", type=int, default=10 ** 6,
                        help="entry magnitude bound")
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    rng = random.Random(args.seed)
    print(f"{'size':>5} {'reps':>5} {'kernel':>8} {'bareiss':>10} {'mod_rank':>10}")
    for size in sizes:
        matrices = make_matrices(rng, size, args.reps, args.hi)
        py_b, py_m, py_acc = time_backend(pykernels, matrices, "python")
        print(f"{size:>5} {args.reps:>5} {'python':>8} {py_b:>9.4f}s {py_m:>9.4f}s")
        if fastkernels is None:
            print(f"{size:>5} {args.reps:>5} {'cython':>8} {'(not built)':>10}")
            continue
        cy_b, cy_m, cy_acc = time_backend(fastkernels, matrices, "cython")
        assert py_acc == cy_acc, "backends disagree"
        print(f"{size:>5} {args.reps:>5} {'cython':>8} {cy_b:>9.4f}s {cy_m:>9.4f}s"
              f"   speedup x{py_b / cy_b:.2f} / x{py_m / cy_m:.2f}")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Compare the two pushforward backends on real branching workloads.

The jitted kernels walk distinct signed permutations; the numpy fallback
enumerates all of them vectorised and divides out the redundancy.  Both are
exact and must agree on every count.  Formal characters are cached inside
the process after the first call, so the timed loop is dominated by the
pushforward kernels themselves.

Usage:
    python3 benchmarks/bench_pushforward.py [--repeat N] [--workers K]
"""

import argparse
import os
import time

from contactpde.branching import ring_dimension
from contactpde.rootsys import CartanType

WORKLOADS = (
    ("G2", 3),
    ("B3", 4),
    ("D4", 2),
    ("F4", 2),
)


def timed(name, degree, workers, repeat):
    ct = CartanType.parse(name)
    best = float("inf")
    value = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = ring_dimension(ct, degree, workers=workers)
        best = min(best, time.perf_counter() - t0)
    return value, best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    # warm both backends (jit compilation, character caches) off the clock
    for backend in ("numba", "numpy"):
        os.environ["CONTACTPDE_BACKEND"] = backend
        ring_dimension(CartanType.parse("G2"), 1, workers=1)

    header = f"{'workload':<10} {'numba':>10} {'numpy':>10} {'ratio':>8}  value"
    print(header)
    print("-" * len(header))
    for name, degree in WORKLOADS:
        results = {}
        for backend in ("numba", "numpy"):
            os.environ["CONTACTPDE_BACKEND"] = backend
            results[backend] = timed(name, degree, args.workers, args.repeat)
        v_numba, t_numba = results["numba"]
        v_numpy, t_numpy = results["numpy"]
        if v_numba != v_numpy:
            raise SystemExit(
                f"backend mismatch on {name} d={degree}: {v_numba} vs {v_numpy}"
            )
        ratio = t_numpy / t_numba if t_numba > 0 else float("inf")
        print(
            f"{name + ' d=' + str(degree):<10} {t_numba:>9.3f}s {t_numpy:>9.3f}s "
            f"{ratio:>7.1f}x  {v_numba}"
        )
    os.environ.pop("CONTACTPDE_BACKEND", None)


if __name__ == "__main__":
    main()

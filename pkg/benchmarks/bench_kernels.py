#!/usr/bin/env python3
"""Benchmark the hot kernels: numba path vs pure-numpy fallback.

Times row generation (pure python, shared by both paths) and the GF(p)
elimination through the two implementations on medium components.  Run

    python benchmarks/bench_kernels.py [--big]

The numba timings require numba; without it the kernel class runs
interpreted and the fallback wins by a wide margin.
"""

from __future__ import annotations

import argparse
import time

from nilcube._backend import HAVE_NUMBA, USE_NUMBA, backend_name
from nilcube.linalg import GFElimination, GFEliminationNumpy, column_permutation
from nilcube.relations import build_system


def bench_component(degs, p):
    t0 = time.perf_counter()
    system = build_system(degs, p)
    t_build = time.perf_counter() - t0
    perm = column_permutation(system)

    results = {}
    for label, cls in (("numba-kernel", GFElimination),
                       ("numpy-fallback", GFEliminationNumpy)):
        elim = cls(system.ncols, p, perm)
        t0 = time.perf_counter()
        elim.insert_rows(system.rows)
        results[label] = (time.perf_counter() - t0, elim.rank)
    r_kernel = results["numba-kernel"][1]
    r_numpy = results["numpy-fallback"][1]
    assert r_kernel == r_numpy, "backends disagree on the rank"
    print(f"  mdeg={degs} p={p}: {system.ncols} cols, "
          f"{len(system.rows)} rows (generation {t_build:.2f}s)")
    for label, (dt, r) in results.items():
        print(f"    {label:<15} {dt:8.3f}s   rank={r}")
    return results


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--big", action="store_true",
                        help="include the 10080-column component")
    args = parser.parse_args()
    print(f"active backend: {backend_name()} "
          f"(numba installed: {HAVE_NUMBA}, enabled: {USE_NUMBA})")
    print("warm-up (jit compilation, small component)")
    bench_component((2, 2), 3)
    print("medium components")
    bench_component((3, 3, 1), 3)
    bench_component((3, 2, 2, 1), 2)
    bench_component((3, 3, 3), 3)
    if args.big:
        print("large component (expect minutes on the fallback)")
        bench_component((3, 3, 1, 1, 1), 3)


if __name__ == "__main__":
    main()

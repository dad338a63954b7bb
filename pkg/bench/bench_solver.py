"""Benchmark the elimination kernel: compiled backend vs numpy fallback.

Usage: python3 bench/bench_solver.py [--moduli 100 400 900] [--repeats 3]

The elimination dominates solve_vanishing, so this is the number that
matters when choosing FOURIERPAIRS_BACKEND.  The first numba call pays
compilation; a warmup run is excluded from the timings.
"""

import argparse
import time

import numpy as np

from fourierpairs._kernels import eliminate_with_backend
from fourierpairs.solver import build_system


def time_backend(matrix: np.ndarray, tol: float, backend: str, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        work = matrix.copy()
        t0 = time.perf_counter()
        eliminate_with_backend(work, tol, backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--moduli", type=int, nargs="+", default=[100, 400, 900])
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    backends = ["numpy"]
    try:
        import numba  # noqa: F401

        backends.insert(0, "numba")
        warm = build_system(100)
        eliminate_with_backend(warm.matrix.copy(), 1e-12, "numba")
    except ImportError:
        print("numba not importable; timing the numpy fallback only")

    header = f"{'modulus':>8} {'shape':>12}" + "".join(
        f" {b + ' [s]':>12}" for b in backends
    )
    print(header)
    print("-" * len(header))
    for modulus in args.moduli:
        system = build_system(modulus)
        tol = (
            np.finfo(np.float64).eps
            * max(system.shape)
            * float(np.max(np.abs(system.matrix)))
        )
        times = [
            time_backend(system.matrix, tol, b, args.repeats) for b in backends
        ]
        shape = f"{system.shape[0]}x{system.shape[1]}"
        row = f"{modulus:>8} {shape:>12}" + "".join(f" {t:>12.4f}" for t in times)
        if len(times) == 2 and times[0] > 0:
            row += f"   ({times[1] / times[0]:.1f}x)"
        print(row)


if __name__ == "__main__":
    main()

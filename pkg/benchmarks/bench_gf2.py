"""Benchmark the two GF(2) row-reduction kernels on identical inputs.

Usage:
    python benchmarks/bench_gf2.py [--sizes 64,128,256,512] [--repeats 5]
                                   [--density 0.35] [--seed 7]

The numba kernel is compiled (and warmed) before timing; both backends
reduce copies of the same random matrices, and the pivot counts are compared
to make sure the two kernels agree while being timed.
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from pearlgysin.gf2 import _build_numba_rref, _rref_numpy


def _time(fn, mats: list[np.ndarray], repeats: int) -> tuple[float, list[int]]:
    best = float("inf")
    ranks: list[int] = []
    for _ in range(repeats):
        copies = [m.copy() for m in mats]
        t0 = time.perf_counter()
        ranks = [len(fn(c)) for c in copies]
        best = min(best, time.perf_counter() - t0)
    return best, ranks


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="64,128,256,512")
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--density", type=float, default=0.35)
    ap.add_argument("--batch", type=int, default=8, help="matrices per size")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",") if s]

    try:
        numba_rref = _build_numba_rref()
    except ImportError:
        print("numba is not installed; nothing to compare")
        return 1
    numba_rref(np.zeros((4, 4), dtype=np.uint8))  # warm the JIT

    rng = np.random.default_rng(args.seed)
    print(f"{'size':>6} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>8}")
    speedups = []
    for n in sizes:
        mats = [
            (rng.random((n, n)) < args.density).astype(np.uint8)
            for _ in range(args.batch)
        ]
        t_np, ranks_np = _time(_rref_numpy, mats, args.repeats)
        t_nb, ranks_nb = _time(numba_rref, mats, args.repeats)
        if ranks_np != ranks_nb:
            raise SystemExit(f"kernels disagree at size {n}: {ranks_np} vs {ranks_nb}")
        speedups.append(t_np / t_nb)
        print(f"{n:>6} {t_np * 1e3:>12.2f} {t_nb * 1e3:>12.2f} {t_np / t_nb:>7.1f}x")
    print(f"geometric-mean speedup: {statistics.geometric_mean(speedups):.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

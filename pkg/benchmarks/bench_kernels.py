"""Compare the compiled kernels with the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from etnckit import _kernels_py, kernels
from etnckit.local_ring import defining_polynomial


def _cases(rng: np.random.Generator):
    p, r, N = 5, 3, 10
    P = p ** N
    poly = np.array(defining_polynomial(p, r)[:r], dtype=np.int64) % P
    a = rng.integers(0, P, size=(4096, r), dtype=np.int64)
    b = rng.integers(0, P, size=(4096, r), dtype=np.int64)
    s1 = rng.integers(0, P, size=(64, r), dtype=np.int64)
    s2 = rng.integers(0, P, size=(64, r), dtype=np.int64)
    L = 5 ** 4 * 4
    th = rng.integers(0, 4, size=200_000, dtype=np.int64)
    tr = rng.integers(0, 625, size=200_000, dtype=np.int64)
    return {
        "ring_mul 4096 x deg 3": (lambda m: m.ring_mul(a, b, poly, P)),
        "series_mul 64 terms": (lambda m: m.series_mul(s1, s2, poly, P)),
        "exponent_counts 2e5": (lambda m: m.exponent_counts(th, tr, L // 4, L // 625, L)),
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    compiled = kernels._compiled
    if compiled is None:
        print("compiled extension unavailable; only the fallback is timed")
    rng = np.random.default_rng(0)
    print(f"{'kernel':26s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for name, fn in _cases(rng).items():
        t_py = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat)) * 1e3
        if compiled is None:
            print(f"{name:26s} {t_py:10.2f} {'-':>10s} {'-':>8s}")
            continue
        if not np.array_equal(fn(_kernels_py), fn(compiled)):
            raise SystemExit(f"{name}: backends disagree")
        t_cy = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:26s} {t_py:10.2f} {t_cy:10.2f} {t_py / t_cy:8.1f}x")


if __name__ == "__main__":
    main()

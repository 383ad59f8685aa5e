#!/usr/bin/env python3
"""Time the compiled kernels against the numpy fallback on identical inputs.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--seed 0]
"""
import argparse
import time

import numpy as np

from csoutliers.kernels import available_backends


def cases(rng):
    S8 = rng.integers(0, 2, size=(12, 10), dtype=np.uint8)
    S18 = rng.integers(0, 2, size=(18, 12), dtype=np.uint8)
    S30 = rng.integers(0, 4, size=(30, 40), dtype=np.uint8)
    W = rng.multinomial(500, np.full(30, 1 / 30), size=512).astype(np.int64)
    X = rng.integers(0, 4, size=(512, 40), dtype=np.uint8)
    return [
        ("best_subset n=18 m=9", "best_subset", (S18, 9, 2)),
        ("best_center l=10 m=6", "best_center", (S8, 2, 6)),
        ("multiset_candidates n=8 r=18", "multiset_candidates", (S8[:8], 18, 2)),
        ("weighted_consensus T=512", "weighted_consensus", (S30, W, 4)),
        ("center_costs T=512 m=25", "center_costs", (S30, X, 25, 4)),
    ]


def best_time(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the fallback is available")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':34s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}  agree")
    for label, name, call_args in cases(rng):
        t_py, out_py = best_time(getattr(backends["python"], name), call_args, args.repeat)
        if "cython" in backends:
            t_cy, out_cy = best_time(getattr(backends["cython"], name), call_args, args.repeat)
            print(f"{label:34s} {t_py:10.4f} {t_cy:10.4f} {t_py / t_cy:7.1f}x  {same(out_py, out_cy)}")
        else:
            print(f"{label:34s} {t_py:10.4f} {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Benchmark the compiled evaluation kernel against the numpy fallback.

Times eval_many on realistic workloads: the derivative slices of random
tensor pairs evaluated over Monte Carlo sample blocks, plus the raw
kernel on synthetic coefficient tables.  Run after an editable install;
the native column appears only when the extension was built.

    python3 benchmarks/bench_kernels.py [--samples N]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from chaosdet._kernels import backends
from chaosdet.chaos import eval_arrays
from chaosdet.malliavin import ChaosPair
from chaosdet.montecarlo import estimate_edet
from chaosdet.tensors import random_unit_tensor


def time_call(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_eval_many(n_samples: int) -> None:
    impls = backends()
    print(f"eval_many, {n_samples} samples")
    header = f"{'case':<28}" + "".join(f"{name:>12}" for name in impls)
    if len(impls) == 2:
        header += f"{'speedup':>10}"
    print(header)
    cases = [
        ("d=2 order=2 (9 slices)", 2, 2),
        ("d=3 order=3", 3, 3),
        ("d=5 order=4", 5, 4),
    ]
    rng = np.random.default_rng(0)
    for label, d, k in cases:
        f = random_unit_tensor(1, d, k)
        rows = [eval_arrays(f.slice(i)) for i in range(d)]
        samples = rng.standard_normal((n_samples, d))
        times = {}
        for name, impl in impls.items():
            times[name] = time_call(
                lambda impl=impl: [impl(occ, w, samples) for occ, w in rows]
            )
        line = f"{label:<28}" + "".join(f"{times[name]*1e3:>10.2f}ms" for name in impls)
        if len(times) == 2:
            line += f"{times['python'] / times['native']:>9.1f}x"
        print(line)


def bench_estimator(n_samples: int) -> None:
    print(f"\nestimate_edet, {n_samples} samples (selected backend)")
    for d, k in [(2, 2), (3, 3), (4, 4)]:
        pair = ChaosPair(random_unit_tensor(3, d, k), random_unit_tensor(4, d, k))
        best = time_call(lambda: estimate_edet(pair, n_samples, seed=0), repeats=3)
        print(f"  d={d} order={k}: {best*1e3:8.1f}ms")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=200_000)
    args = parser.parse_args()
    impls = backends()
    print(f"available backends: {', '.join(impls)}\n")
    bench_eval_many(args.samples)
    bench_estimator(args.samples)


if __name__ == "__main__":
    main()

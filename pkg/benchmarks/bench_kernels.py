#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Usage:
    python benchmarks/bench_kernels.py [--repeats 5]

Times the two hot paths (per-sample trace filling and the sequential
two-probe baseline walk) plus one end-to-end run per variant under each
backend, and checks the outputs agree bit-for-bit while timing them.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from monobandit import _core_py

try:
    from monobandit import _core
except ImportError:
    _core = None


def best_of(repeats, fn, *args):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_fill_block(repeats: int):
    k = 1_000_000
    rng = np.random.default_rng(0)
    noise = rng.random(k) - 0.5
    results = {}
    for name, impl in (("compiled", _core), ("python", _core_py)):
        if impl is None:
            continue
        x = np.empty(k)
        y = np.empty(k)
        r = np.empty(k)
        p = np.empty(k, dtype=np.int64)
        lag = np.empty(k)
        e = np.empty(k, dtype=np.int8)
        secs, _ = best_of(
            repeats, impl.fill_block,
            x, y, r, p, lag, e, 0, k, 0.7, 0.123, 0.02, 3, 0.25, 1, 0, noise,
        )
        results[name] = (secs, y.copy())
    return "fill_block (1e6 samples)", results


def bench_kw_loop(repeats: int):
    budget = 1_000_000
    rng = np.random.default_rng(1)
    noise = rng.random(budget) - 0.5
    results = {}
    for name, impl in (("compiled", _core), ("python", _core_py)):
        if impl is None:
            continue
        x = np.empty(budget)
        y = np.empty(budget)
        r = np.empty(budget)
        secs, out = best_of(
            repeats, impl.kw_loop,
            1, 1.25, 5.0, 2.0 / 18.75, 0.0, 2.0, 0.0, 0.1, 0.2, 1.0,
            noise, x, y, r, 0, budget,
        )
        results[name] = (secs, y.copy())
    return "kw_loop (1e6 samples, sequential)", results


def bench_end_to_end(repeats: int):
    import os
    import subprocess
    import sys

    code = (
        "import time, monobandit as mb\n"
        "spec = mb.make_quartic_blend(1.25, 5.0, 2.0/18.75, 0.0, 2.0)\n"
        "noise = mb.NoiseModel(kind='uniform')\n"
        "t0 = time.perf_counter()\n"
        "mb.run_adaptive_lgd(spec, noise, 10**6, delta1=0.3, q=0.3, kappa=0.005, seed=0)\n"
        "mb.run_kw_baseline(spec, noise, 10**6, seed=0)\n"
        "print(time.perf_counter() - t0)\n"
    )
    results = {}
    for name in ("compiled", "python"):
        if name == "compiled" and _core is None:
            continue
        env = dict(os.environ, MONOBANDIT_BACKEND=("py" if name == "python" else "compiled"))
        best = float("inf")
        for _ in range(repeats):
            out = subprocess.run(
                [sys.executable, "-c", code], env=env, capture_output=True, text=True
            )
            best = min(best, float(out.stdout.strip()))
        results[name] = (best, None)
    return "end-to-end adaptive + kw at T=1e6", results


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if _core is None:
        print("compiled extension not available; benchmarking fallback only\n")

    for bench in (bench_fill_block, bench_kw_loop, bench_end_to_end):
        title, results = bench(args.repeats)
        print(f"== {title}")
        baseline = results.get("python", (float("nan"), None))[0]
        for name, (secs, payload) in results.items():
            speedup = baseline / secs if secs else float("nan")
            print(f"   {name:>8}: {secs * 1e3:9.2f} ms   ({speedup:5.2f}x vs python)")
        outs = [payload for _, payload in results.values() if payload is not None]
        if len(outs) == 2:
            agree = np.array_equal(outs[0], outs[1])
            print(f"   outputs bit-identical: {agree}")
            if not agree:
                return 1
        print()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

#!/usr/bin/env python3
"""Benchmark the hot kernels on both paths: numba @njit vs the fallback.

Runs the workload in-process under the current LEVYCF_NO_NUMBA selection,
then re-executes itself in a subprocess with the flag flipped and prints a
comparison table.  Workloads mirror the heavy call sites: the log-denominator
scan over 2^20 letters and Birkhoff tail evaluation at n = 10^5, depth 40.

    python3 benchmarks/bench_kernels.py
"""

import json
import math
import os
import subprocess
import sys
import time

import numpy as np


def build_letters(count, seed=12345):
    rng = np.random.default_rng(seed)
    return rng.integers(1, 3, size=count).astype(np.float64)


def run_workloads(repeats=5):
    from levycf import _kernels

    _kernels.warmup()
    scan_letters = build_letters(2**20)
    birkhoff_letters = build_letters(10**5 + 40)
    results = {"path": "numba" if _kernels.USING_NUMBA else "fallback"}

    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        total, comp, _ = _kernels.logq_scan(scan_letters, math.inf, 0.0, 0.0)
        best = min(best, time.perf_counter() - t0)
    results["logq_scan_s"] = best
    results["logq_value"] = (total + comp) / scan_letters.shape[0]

    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        tails = _kernels.birkhoff_tails(birkhoff_letters, 10**5, 40)
        best = min(best, time.perf_counter() - t0)
    results["birkhoff_s"] = best
    results["birkhoff_value"] = float(np.log(tails).mean())
    return results


def main():
    if "--inner" in sys.argv:
        print(json.dumps(run_workloads()))
        return

    here = run_workloads()
    env = dict(os.environ)
    env["LEVYCF_NO_NUMBA"] = "" if here["path"] == "fallback" else "1"
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--inner"],
        capture_output=True, text=True, env=env, check=True,
    )
    other = json.loads(proc.stdout.strip().splitlines()[-1])

    by_path = {r["path"]: r for r in (here, other)}
    numba, fallback = by_path["numba"], by_path["fallback"]
    print(f"{'kernel':<28}{'numba':>12}{'fallback':>12}{'speedup':>10}")
    for label, key in [("logq_scan (2^20 letters)", "logq_scan_s"), ("birkhoff_tails (1e5 x 40)", "birkhoff_s")]:
        print(f"{label:<28}{numba[key]:>11.4f}s{fallback[key]:>11.4f}s{fallback[key] / numba[key]:>9.1f}x")
    for key in ("logq_value", "birkhoff_value"):
        drift = abs(numba[key] - fallback[key])
        assert drift < 1e-12, f"paths disagree on {key}: {drift}"
    print("values agree across paths to <1e-12")


if __name__ == "__main__":
    main()

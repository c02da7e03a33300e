#!/usr/bin/env python3
"""Benchmark the compiled family-scan kernel against the pure-Python fallback.

Runs the same scans through both backends, checks the results are
bit-identical, and reports throughput.  Usage:

    python benchmarks/bench_scan.py [--budget 5] [--rows 20]
"""

import argparse
import time

import numpy as np

from summability import _kernels


def bench_case(name, table, starts, exps, budget, mode, constant=0.0, repeat=3):
    rows = {}
    for backend in _kernels.available_backends():
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            out = _kernels.scan_table(
                table, starts, exps, budget, mode, constant, backend=backend
            )
            best = min(best, time.perf_counter() - t0)
        rows[backend] = (best, out)
    base = rows["python"][1]
    for backend, (elapsed, out) in rows.items():
        assert out.value == base.value, "backends disagree"
        assert out.families == base.families
        print(
            f"  {name:28s} {backend:8s} {elapsed * 1e3:10.2f} ms "
            f"{out.families / elapsed / 1e6:8.2f} Mfam/s  families={out.families}"
        )
    if "compiled" in rows:
        speedup = rows["python"][0] / rows["compiled"][0]
        print(f"  {name:28s} speedup  {speedup:10.1f}x")
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rows", type=int, default=20)
    ap.add_argument("--budget", type=int, default=5)
    args = ap.parse_args()

    print(f"backends: {_kernels.available_backends()}")
    rng = np.random.default_rng(0)

    # summing-shaped scan: 3 lhs columns, 3 rhs columns
    table = rng.uniform(0.0, 2.0, size=(args.rows, 6))
    bench_case(
        f"summing {args.rows}x(3+3) b={args.budget}",
        table, [0, 3, 6], [0.5, 1.0], args.budget, _kernels.SLACK_MIN, 1.5,
    )

    # domination-shaped scan: s column plus two kernel blocks
    table = rng.uniform(0.0, 2.0, size=(args.rows * 2, 1 + 1 + 2))
    bench_case(
        f"pdt {args.rows * 2}x(1+1+2) b={args.budget - 1}",
        table, [0, 1, 2, 4], [1.0, 0.5, 0.5], args.budget - 1,
        _kernels.RATIO_MAX,
    )


if __name__ == "__main__":
    main()

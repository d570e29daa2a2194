#!/usr/bin/env python3
"""Time the hot kernels on both execution paths and check they agree.

Every numeric kernel is written once and bound either to its numba-compiled
form or run as plain numpy (the path normally selected by availability and
the RMBOOST_DISABLE_NUMBA flag; see rmboost.accel).  This script times the
public entry points under each binding on realistic workloads, prints the
per-call medians with the compiled-path speedup, and asserts the two paths
return identical results — the package's reproducibility contract.

Usage: python3 benchmarks/bench_kernels.py [--repeats 7] [--quick]
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from rmboost import accel
from rmboost.learner import RmbConfig, fit, model_to_json
from rmboost.linprog import LpProblem, solve_master
from rmboost.stumps import (
    StumpScanIndex,
    WeightedSample,
    best_stump,
    enumerate_stumps,
    fit_regression_stump,
    stump_columns,
)


def timed(func, repeats):
    func()  # warm-up: triggers JIT compilation on the compiled path
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        result = func()
        samples.append(time.perf_counter() - start)
    return statistics.median(samples), result


def workloads(quick):
    rng = np.random.default_rng(0)
    scale = 4 if quick else 1

    n, d = 20_000 // scale, 24
    X = rng.normal(size=(n, d))
    y = np.where(X[:, 0] + 0.4 * X[:, 1] > 0, 1.0, -1.0)
    index = StumpScanIndex(X)
    sample = WeightedSample(rng.random(n) + 0.1, y)
    targets = rng.normal(size=n)
    weights = rng.random(n) + 0.1

    m = 2_000 // scale
    Xm = rng.normal(size=(m, 6))
    ym = np.where(rng.random(m) < 0.5, 1.0, -1.0)
    columns = stump_columns(enumerate_stumps(Xm[:, :2]), Xm)[:, :80]

    nf, df = 600 // scale, 8
    Xf = rng.normal(size=(nf, df))
    yf = np.where(Xf[:, 0] + 0.5 * Xf[:, 1] + 0.3 * rng.normal(size=nf) > 0,
                  1.0, -1.0)

    return [
        ("weighted stump scan",
         lambda: best_stump(index, sample)),
        ("regression stump scan",
         lambda: fit_regression_stump(index, targets, weights)),
        ("master LP solve",
         lambda: solve_master(LpProblem(columns, ym, 0.1)).objective),
        ("full column-generation fit",
         lambda: model_to_json(fit(Xf, yf, RmbConfig(lam=0.05)))),
    ]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=7)
    parser.add_argument("--quick", action="store_true",
                        help="smaller workloads (for smoke runs)")
    args = parser.parse_args(argv)

    if not accel.NUMBA_AVAILABLE:
        print("numba is not installed; only the numpy path can run here")
        return 1

    rows = []
    original = accel.NUMBA_ENABLED
    for name, call in workloads(args.quick):
        results = {}
        try:
            for use_numba in (False, True):
                accel.NUMBA_ENABLED = use_numba
                results[use_numba] = timed(call, args.repeats)
        finally:
            accel.NUMBA_ENABLED = original
        (t_np, r_np), (t_nb, r_nb) = results[False], results[True]
        agree = r_np == r_nb if not isinstance(r_np, tuple) else all(
            a == b for a, b in zip(r_np, r_nb))
        rows.append((name, t_np, t_nb, t_np / t_nb, agree))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'numpy':>10}  {'numba':>10}  "
          f"{'speedup':>7}  identical")
    for name, t_np, t_nb, speedup, agree in rows:
        print(f"{name:<{width}}  {t_np * 1e3:>8.2f}ms  {t_nb * 1e3:>8.2f}ms  "
              f"{speedup:>6.1f}x  {agree}")

    if not all(r[4] for r in rows):
        print("\nERROR: the execution paths disagree")
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

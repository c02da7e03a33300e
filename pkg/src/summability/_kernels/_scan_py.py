"""Pure-Python family scan, the reference implementation.

Enumerates every integer multiplicity vector eta >= 0 with 1 <= sum(eta) <=
budget over the rows of a pre-powered table and reduces a max-ratio or a
min-slack statistic over them.  The compiled kernel in ``_scan_cy`` mirrors
this code operation for operation (same summation order, no FMA contraction),
so the two backends return bit-identical results.

Table layout: columns are grouped in blocks given by ``starts``; block 0 is
the left-hand side, blocks 1.. are right-hand factors.  For a family eta the
statistic uses

    lhs = (max over block-0 columns of sum_j eta_j table[j, c]) ** exps[0]
    rhs = prod over blocks k>=1 of (max over block-k columns) ** exps[k]

mode 0 (ratio): maximize lhs/rhs, skipping 0/0 families; a family with
rhs == 0 < lhs aborts the scan with status 1 (no finite constant exists).
mode 1 (slack): minimize (constant*rhs - lhs)/max(1, constant*rhs).
Ties are broken toward the lexicographically smallest family.
"""

from __future__ import annotations

import math

import numpy as np


def _lex_smaller(a, b) -> bool:
    for x, y in zip(a, b):
        if x != y:
            return x < y
    return False


def scan(table, starts, exps, budget, mode, constant):
    table = np.ascontiguousarray(table, dtype=np.float64)
    starts = np.asarray(starts, dtype=np.int64)
    exps = np.asarray(exps, dtype=np.float64)
    n, ncols = table.shape
    nblocks = len(exps)
    budget = int(budget)

    sums = np.zeros((budget + 1, ncols))
    eta = np.zeros(n, dtype=np.int64)
    best = -math.inf if mode == 0 else math.inf
    best_eta = None
    has_best = False
    families = 0
    degenerate = 0
    status = 0

    def evaluate(depth: int) -> bool:
        nonlocal best, best_eta, has_best, families, degenerate, status
        row = sums[depth]
        families += 1
        lo, hi = starts[0], starts[1]
        lhs = math.pow(float(row[lo:hi].max()), exps[0])
        rhs = 1.0
        for k in range(1, nblocks):
            lo, hi = starts[k], starts[k + 1]
            rhs *= math.pow(float(row[lo:hi].max()), exps[k])
        if mode == 0:
            if rhs == 0.0:
                if lhs == 0.0:
                    degenerate += 1
                    return False
                status = 1
                best = math.inf
                best_eta = eta.copy()
                has_best = True
                return True
            ratio = lhs / rhs
            if not has_best or ratio > best:
                best, best_eta, has_best = ratio, eta.copy(), True
            elif ratio == best and _lex_smaller(eta, best_eta):
                best_eta = eta.copy()
        else:
            scaled = constant * rhs
            denom = scaled if scaled > 1.0 else 1.0
            slack = (scaled - lhs) / denom
            if not has_best or slack < best:
                best, best_eta, has_best = slack, eta.copy(), True
            elif slack == best and _lex_smaller(eta, best_eta):
                best_eta = eta.copy()
        return False

    def rec(start: int, rem: int, depth: int) -> bool:
        # Positions < start hold the committed prefix; the suffix is zero.
        for k in range(start, n):
            row_k = table[k]
            base = sums[depth]
            for v in range(rem, 0, -1):
                eta[k] = v
                np.add(base, v * row_k, out=sums[depth + 1])
                if evaluate(depth + 1):
                    return True
                if rem - v >= 1 and k + 1 < n:
                    if rec(k + 1, rem - v, depth + 1):
                        return True
            eta[k] = 0
        return False

    rec(0, budget, 0)
    value = best if has_best else (-math.inf if mode == 0 else math.inf)
    return status, value, best_eta, families, degenerate

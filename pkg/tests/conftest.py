"""Shared instance generators and independent oracles.

The oracles reimplement the defining formulas with plain Python loops over
``enumerate_families`` so they share no code path with the scan kernels or
the LP solver they check.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from summability.builders import build_random_summing
from summability.core import harmonic_combine
from summability.errors import DegenerateFamily, ZeroDenominator
from summability.instance import SummingInstance, enumerate_families
from summability.pdt import PdtInstance


def random_summing_sized(seed: int, max_n: int = 4, max_cols: int = 3,
                         scale: float = 2.0) -> SummingInstance:
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, max_n + 1))
    v = int(rng.integers(1, max_cols + 1))
    w = int(rng.integers(1, max_cols + 1))
    return build_random_summing(seed, n, v, w, scale)


def random_pdt_t1(seed: int, max_atoms: int = 8, max_points: int = 32) -> PdtInstance:
    rng = np.random.default_rng(seed)
    K = int(rng.integers(1, max_atoms + 1))
    D = int(rng.integers(1, max_points + 1))
    p = float(rng.choice([1.0, 2.0]))
    return PdtInstance(
        atom_sets=(tuple(f"phi{i}" for i in range(K)),),
        exponents=harmonic_combine([p]),
        labels=tuple(f"d{j}" for j in range(D)),
        s_values=rng.uniform(0.0, 2.0, size=D),
        r_tables=(rng.uniform(0.0, 2.0, size=(D, K)),),
    )


def oracle_summing_max_ratio(inst: SummingInstance, q: float, p: float,
                             alpha: float, budget: int) -> float:
    """Plain-loop maximum of lhs**(1/alpha)/rhs over integer families."""
    best = -math.inf
    for fam in enumerate_families(inst.n, budget):
        eta = fam.weights
        lhs = max(
            sum(eta[j] * inst.s_table[j, v] ** q for j in range(inst.n))
            for v in range(len(inst.v_ids))
        )
        rhs = max(
            sum(eta[j] * inst.r_table[j, w] ** p for j in range(inst.n))
            for w in range(len(inst.w_ids))
        )
        if rhs == 0.0:
            if lhs == 0.0:
                continue
            raise ZeroDenominator("oracle: not summing", family=fam)
        best = max(best, lhs ** (1.0 / alpha) / rhs)
    return best


def oracle_pdt_max_ratio(inst: PdtInstance, budget: int) -> float:
    """Plain-loop maximum family ratio for a domination instance."""
    p = inst.exponents.combined
    best = -math.inf
    for fam in enumerate_families(inst.n_points, budget):
        eta = fam.weights
        lhs = sum(eta[j] * inst.s_values[j] ** p for j in range(inst.n_points)) ** (1.0 / p)
        rhs = 1.0
        for k in range(inst.t):
            pk = inst.exponents.parts[k]
            rhs *= max(
                sum(eta[j] * inst.r_tables[k][j, c] ** pk for j in range(inst.n_points))
                for c in range(len(inst.atom_sets[k]))
            ) ** (1.0 / pk)
        if rhs == 0.0:
            if lhs == 0.0:
                continue
            raise DegenerateFamily("oracle: unbounded family")
        best = max(best, lhs / rhs)
    return best


@pytest.fixture
def two_point_pdt() -> PdtInstance:
    return PdtInstance(
        atom_sets=(("p1", "p2"),),
        exponents=harmonic_combine([1.0]),
        labels=("d1", "d2"),
        s_values=np.array([1.0, 1.0]),
        r_tables=(np.array([[1.0, 0.0], [0.0, 1.0]]),),
    )


@pytest.fixture
def singleton_pdt() -> PdtInstance:
    return PdtInstance(
        atom_sets=(("phi",),),
        exponents=harmonic_combine([1.0]),
        labels=("d",),
        s_values=np.array([3.0]),
        r_tables=(np.array([[1.0]]),),
    )

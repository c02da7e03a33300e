"""Best abstract summing constants.

In the homogeneous case (alpha = 1) the family ratio is invariant under
positive scaling of the weights, so the supremum over real-weighted families
equals the supremum over integer multisets and is an exact linear program
per v-column: maximize the weighted lhs column sum subject to every weighted
rhs column sum being at most 1.  For alpha != 1 the real-weight supremum
blows up at small weights, so only integer families up to a budget carry
meaning and the result is a lower bound; the certificate kind records which
regime produced it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import _kernels
from .errors import NotSumming, OutOfRange
from .instance import SummingInstance, WeightVector, family_ratio
from .solver import LpProblem, solve_lp

__all__ = ["Certificate", "summing_constant_exact", "summing_constant_bruteforce"]


@dataclass(frozen=True)
class Certificate:
    """A constant together with how it was obtained and a witness.

    kind: "ExactLP" (the constant is the exact supremum), "BruteForceLowerBound"
    (max over enumerated integer families), "Predicted" (image of a premise
    constant under an inclusion transform), or "Domination" (measure-based
    upper bound).  ``slack`` is a diagnostic: for family witnesses, the gap
    between the reported constant and the witness's re-evaluated ratio.
    """

    constant: float
    kind: str
    witness: Any = None
    slack: float = 0.0
    metadata: dict = field(default_factory=dict)


def _unbounded_witness(inst: SummingInstance, q: float) -> WeightVector | None:
    """Single point with some S > 0 but R identically zero, if any."""
    dead = ~inst.r_table.any(axis=1)
    live = inst.s_table.any(axis=1)
    hits = np.flatnonzero(dead & live)
    if hits.size == 0:
        return None
    eta = np.zeros(inst.n)
    eta[hits[0]] = 1.0
    return WeightVector(tuple(eta))


def summing_constant_exact(inst: SummingInstance, q: float, p: float) -> Certificate:
    """Exact homogeneous (alpha = 1) summing constant by linear programming.

    Per v-column LP: maximize sum_j eta_j s[j,v]**q subject to
    sum_j eta_j r[j,w]**p <= 1 for every w, eta >= 0.  The constant is the
    best LP value over v; ties between v-columns break toward the lowest
    index so reported witnesses are reproducible.
    """
    if q < 1.0 or p < 1.0:
        raise OutOfRange(f"exact constants need q, p >= 1, got q={q}, p={p}")
    bad = _unbounded_witness(inst, q)
    if bad is not None:
        raise NotSumming(
            "a point has S > 0 but R = 0 for every w; no finite constant", family=bad
        )
    A = np.power(inst.s_table, q)
    B = np.power(inst.r_table, p)
    best_value = -math.inf
    best_eta = None
    for v in range(len(inst.v_ids)):
        sol = solve_lp(LpProblem(A[:, v], B.T, np.ones(len(inst.w_ids))))
        if sol.status == "unbounded":  # unreachable given the upfront check
            raise NotSumming("LP unbounded; no finite constant", family=None)
        if sol.value > best_value:
            best_value = sol.value
            best_eta = sol.x
    witness = WeightVector(tuple(np.maximum(best_eta, 0.0)))
    constant = float(best_value)
    realized = (
        family_ratio(inst, q, p, 1.0, witness) if witness.total > 0.0 else constant
    )
    return Certificate(
        constant=constant,
        kind="ExactLP",
        witness=witness,
        slack=constant - realized,
        metadata={"q": q, "p": p, "alpha": 1.0},
    )


def summing_constant_bruteforce(
    inst: SummingInstance,
    q: float,
    p: float,
    alpha: float = 1.0,
    budget: int = 8,
) -> Certificate:
    """Max of lhs**(1/alpha)/rhs over integer families of total <= budget.

    A lower bound for the true constant; for alpha = 1 it approaches the
    exact LP value from below as the budget grows.  Raises NotSumming (with
    the witness family) if any family has positive lhs with zero rhs.
    """
    if q <= 0.0 or p <= 0.0 or alpha <= 0.0:
        raise OutOfRange("q, p, alpha must be > 0")
    if budget < 1:
        raise OutOfRange(f"budget must be >= 1, got {budget}")
    table = np.hstack([np.power(inst.s_table, q), np.power(inst.r_table, p)])
    nv = len(inst.v_ids)
    out = _kernels.scan_table(
        table,
        starts=[0, nv, nv + len(inst.w_ids)],
        exps=[1.0 / alpha, 1.0],
        budget=budget,
        mode=_kernels.RATIO_MAX,
    )
    if out.zero_denominator:
        raise NotSumming(
            "family with positive lhs and zero rhs; no finite constant",
            family=WeightVector(tuple(out.eta.astype(float))),
        )
    if out.eta is None:  # every family was 0/0: nothing constrains the constant
        return Certificate(
            constant=0.0,
            kind="BruteForceLowerBound",
            witness=None,
            metadata={"q": q, "p": p, "alpha": alpha, "budget": budget,
                      "families": out.families, "degenerate": out.degenerate},
        )
    witness = WeightVector(tuple(out.eta.astype(float)))
    realized = family_ratio(inst, q, p, alpha, witness)
    return Certificate(
        constant=out.value,
        kind="BruteForceLowerBound",
        witness=witness,
        slack=out.value - realized,
        metadata={"q": q, "p": p, "alpha": alpha, "budget": budget,
                  "families": out.families, "degenerate": out.degenerate},
    )

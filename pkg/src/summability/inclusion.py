"""Inclusion-principle transforms and their desk-scale certification.

``verify_inclusion`` certifies the premise constant exactly (homogeneous LP),
transforms it with the predicted power and adjustment exponent, and then
checks the concluded inequality over every integer family up to a budget.
``verify_multilinear_inclusion`` does the same on instances carrying a scalar
action: families range over (point, scalar) pairs and the concluded
inequality holds in root form with the premise constant unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import Exponents, compute_alpha
from .errors import NotSumming, OutOfRange, PremiseNotCertified
from .instance import SummingInstance, WeightVector
from .summing import Certificate, summing_constant_exact

__all__ = [
    "MultiplicativeInstance",
    "InclusionReport",
    "predict_inclusion",
    "verify_inclusion",
    "verify_multilinear_inclusion",
]

_SLACK_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class MultiplicativeInstance:
    """A summing instance whose points carry a vector-space scaling action.

    Scaling a point by lambda multiplies both its S-row and its R-row by
    |lambda|.  The scalars to probe live on a finite grid; scaled rows are
    produced at evaluation time, never stored.
    """

    base: SummingInstance
    scalar_grid: tuple[float, ...]

    def __post_init__(self):
        grid = tuple(float(x) for x in self.scalar_grid)
        if len(grid) == 0:
            raise OutOfRange("scalar_grid must be nonempty")
        if any(not np.isfinite(x) or x <= 0.0 for x in grid):
            raise OutOfRange("scalar grid entries must be finite and > 0")
        object.__setattr__(self, "scalar_grid", grid)

    def expanded_ids(self) -> tuple[str, ...]:
        return tuple(
            f"{pid}*{lam:g}" for pid in self.base.point_ids for lam in self.scalar_grid
        )

    def expanded_tables(self, s_power: float, r_power: float) -> tuple[np.ndarray, np.ndarray]:
        """Powered tables over (point, scalar) rows: (lam*S)**a and (lam*R)**b."""
        lam = np.asarray(self.scalar_grid)
        s = np.power(self.base.s_table, s_power)[:, None, :] * np.power(lam, s_power)[None, :, None]
        r = np.power(self.base.r_table, r_power)[:, None, :] * np.power(lam, r_power)[None, :, None]
        n = self.base.n * len(self.scalar_grid)
        return s.reshape(n, -1), r.reshape(n, -1)


@dataclass(frozen=True, eq=False)
class InclusionReport:
    """Outcome of checking a concluded inequality over enumerated families.

    ``worst_slack`` is the minimum over families of the concluded inequality's
    slack, relative to max(1, predicted * rhs); the check passes when it is
    >= -1e-9.  ``worst_family`` is the lexicographically smallest minimizer.
    """

    exponents: Exponents
    premise: Certificate
    predicted: Certificate
    worst_slack: float
    worst_family: WeightVector
    families_checked: int
    alpha: float

    @property
    def passed(self) -> bool:
        return self.worst_slack >= -_SLACK_TOL


def predict_inclusion(premise_constant: float, e: Exponents) -> Certificate:
    """Concluded constant premise**(p2/p1) with the adjustment exponent alpha."""
    if premise_constant < 0.0:
        raise OutOfRange("premise constant must be >= 0")
    ap = compute_alpha(e)
    return Certificate(
        constant=float(premise_constant) ** ap.constant_exponent,
        kind="Predicted",
        metadata={"alpha": ap.alpha, "constant_exponent": ap.constant_exponent,
                  "premise_constant": float(premise_constant)},
    )


def verify_inclusion(
    inst: SummingInstance,
    e: Exponents,
    budget: int = 6,
    premise_constant: float | None = None,
) -> InclusionReport:
    """Certify the premise, predict the concluded constant, check all families.

    The premise (q1, p1) constant is re-certified internally by the exact LP
    so reports are self-contained; ``premise_constant`` overrides it only for
    sensitivity checks (e.g. demonstrating that an understated premise is
    caught as a negative worst slack).
    """
    if premise_constant is None:
        try:
            premise = summing_constant_exact(inst, e.q1, e.p1)
        except NotSumming as exc:
            raise PremiseNotCertified(
                f"premise ({e.q1}, {e.p1}) constant is not finite: {exc}"
            ) from exc
    else:
        premise = Certificate(
            constant=float(premise_constant),
            kind="ExactLP",
            metadata={"q": e.q1, "p": e.p1, "alpha": 1.0, "supplied": True},
        )
    predicted = predict_inclusion(premise.constant, e)
    alpha = predicted.metadata["alpha"]

    table = np.hstack([np.power(inst.s_table, e.q2), np.power(inst.r_table, e.p2)])
    nv = len(inst.v_ids)
    out = _kernels.scan_table(
        table,
        starts=[0, nv, nv + len(inst.w_ids)],
        exps=[1.0 / alpha, 1.0],
        budget=budget,
        mode=_kernels.SLACK_MIN,
        constant=predicted.constant,
    )
    return InclusionReport(
        exponents=e,
        premise=premise,
        predicted=predicted,
        worst_slack=out.value,
        worst_family=WeightVector(tuple(out.eta.astype(float))),
        families_checked=out.families,
        alpha=alpha,
    )


def verify_multilinear_inclusion(
    minst: MultiplicativeInstance,
    e: Exponents,
    budget: int = 5,
    premise_budget: int | None = None,
) -> InclusionReport:
    """Scalar-action inclusion check: same constant, root-form inequality.

    The premise (q1, p1) constant is certified as the best root-form ratio
    over integer families of scaled points (lhs**(1/q1) over rhs**(1/p1));
    that ratio decays as the total multiplicity grows, so small families
    dominate and the budget-limited maximum is an honest certificate on the
    scalar-closed family set.  The concluded (q2, p2) inequality is then
    checked over the same family set with the premise constant itself, no
    powering and no adjustment exponent.
    """
    if premise_budget is None:
        premise_budget = budget
    nv = len(minst.base.v_ids)
    nw = len(minst.base.w_ids)

    s1, r1 = minst.expanded_tables(e.q1, e.p1)
    prem = _kernels.scan_table(
        np.hstack([s1, r1]),
        starts=[0, nv, nv + nw],
        exps=[1.0 / e.q1, 1.0 / e.p1],
        budget=premise_budget,
        mode=_kernels.RATIO_MAX,
    )
    if prem.zero_denominator or not np.isfinite(prem.value) or prem.eta is None:
        raise PremiseNotCertified(
            "premise constant is not finite on the scalar-closed family set"
        )
    premise = Certificate(
        constant=prem.value,
        kind="BruteForceLowerBound",
        witness=WeightVector(tuple(prem.eta.astype(float))),
        metadata={"q": e.q1, "p": e.p1, "root_form": True, "budget": premise_budget,
                  "scalar_grid": minst.scalar_grid},
    )
    predicted = Certificate(
        constant=premise.constant,
        kind="Predicted",
        metadata={"alpha": 1.0, "constant_exponent": 1.0,
                  "premise_constant": premise.constant, "root_form": True},
    )

    s2, r2 = minst.expanded_tables(e.q2, e.p2)
    out = _kernels.scan_table(
        np.hstack([s2, r2]),
        starts=[0, nv, nv + nw],
        exps=[1.0 / e.q2, 1.0 / e.p2],
        budget=budget,
        mode=_kernels.SLACK_MIN,
        constant=predicted.constant,
    )
    return InclusionReport(
        exponents=e,
        premise=premise,
        predicted=predicted,
        worst_slack=out.value,
        worst_family=WeightVector(tuple(out.eta.astype(float))),
        families_checked=out.families,
        alpha=1.0,
    )

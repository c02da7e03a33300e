"""Exponent arithmetic, admissibility, and the weighted AM-GM scalar gap.

Everything here is a pure function of plain floats.  Comparisons in
``check_admissible`` are exact: admissibility describes user-supplied
configuration, and fuzzing it would hide configuration bugs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    EmptyParts,
    InadmissibleExponents,
    LengthMismatch,
    OutOfRange,
)

__all__ = [
    "Exponents",
    "AlphaParams",
    "HarmonicExponents",
    "check_admissible",
    "compute_alpha",
    "harmonic_combine",
    "lemma_yy_gap",
    "conjugate_exponent",
]


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise OutOfRange(f"{name} must be a finite positive real, got {value!r}")
    return value


@dataclass(frozen=True)
class Exponents:
    """The tuple (p1, q1, p2, q2) of summation exponents."""

    p1: float
    q1: float
    p2: float
    q2: float

    def __post_init__(self):
        for name in ("p1", "q1", "p2", "q2"):
            object.__setattr__(self, name, _require_positive(name, getattr(self, name)))


@dataclass(frozen=True)
class AlphaParams:
    """Adjustment exponent alpha and the power applied to the constant."""

    alpha: float
    constant_exponent: float


@dataclass(frozen=True)
class HarmonicExponents:
    """Exponents p_1..p_t together with p defined by 1/p = sum 1/p_j."""

    parts: tuple[float, ...]
    combined: float

    def __post_init__(self):
        parts = tuple(_require_positive("parts", v) for v in self.parts)
        combined = _require_positive("combined", self.combined)
        recip = math.fsum(1.0 / v for v in parts)
        if abs(1.0 / combined - recip) > 1e-12 * max(1.0, abs(recip)):
            raise OutOfRange(
                f"1/combined = {1.0 / combined!r} does not match sum of "
                f"reciprocals {recip!r}"
            )
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "combined", combined)


def check_admissible(e: Exponents) -> bool:
    """True iff p1<=q1, p2<=q2, p1<=p2, q1<=q2 and 1/p1-1/q1 <= 1/p2-1/q2.

    Exact float comparisons, no tolerance.
    """
    return (
        e.p1 <= e.q1
        and e.p2 <= e.q2
        and e.p1 <= e.p2
        and e.q1 <= e.q2
        and 1.0 / e.p1 - 1.0 / e.q1 <= 1.0 / e.p2 - 1.0 / e.q2
    )


def compute_alpha(e: Exponents) -> AlphaParams:
    """Adjustment parameters for the inclusion transform.

    alpha = q2*p1/(q1*p2) when p1 < p2.  The p1 == p2 case needs no
    adjustment at all, so alpha = 1 and the constant is kept as is even when
    the formula would give q2/q1 != 1.
    """
    if not check_admissible(e):
        raise InadmissibleExponents(f"exponents {e} violate admissibility")
    if e.p1 == e.p2:
        return AlphaParams(alpha=1.0, constant_exponent=1.0)
    return AlphaParams(alpha=(e.q2 * e.p1) / (e.q1 * e.p2), constant_exponent=e.p2 / e.p1)


def harmonic_combine(parts: Sequence[float]) -> HarmonicExponents:
    """Combine p_1..p_t into p with 1/p = 1/p_1 + ... + 1/p_t."""
    if len(parts) == 0:
        raise EmptyParts("need at least one exponent")
    clean = tuple(_require_positive(f"parts[{i}]", v) for i, v in enumerate(parts))
    combined = 1.0 / math.fsum(1.0 / v for v in clean)
    return HarmonicExponents(parts=clean, combined=combined)


def lemma_yy_gap(parts: Sequence[float], values: Sequence[float]) -> float:
    """Signed gap RHS - LHS of the weighted AM-GM-type inequality.

    LHS = (1/p) * prod(q_j)^p with 1/p = sum 1/p_j, RHS = sum q_j^{p_j}/p_j.
    Always >= 0 up to roundoff; zero exactly when all q_j^{p_j} agree.
    Returned signed so callers can assert quantitative margins.
    """
    if len(parts) != len(values):
        raise LengthMismatch(f"{len(parts)} exponents vs {len(values)} values")
    he = harmonic_combine(parts)
    vals = [float(v) for v in values]
    for i, v in enumerate(vals):
        if not math.isfinite(v) or v < 0.0:
            raise OutOfRange(f"values[{i}] must be a finite nonnegative real")
    p = he.combined
    prod = 1.0
    for v in vals:
        prod *= v
    lhs = (prod**p) / p
    rhs = math.fsum((v**pj) / pj for pj, v in zip(he.parts, vals))
    return rhs - lhs


def conjugate_exponent(q: float) -> float:
    """q* with 1/q + 1/q* = 1; requires q > 1."""
    q = float(q)
    if not math.isfinite(q) or q <= 1.0:
        raise OutOfRange(f"conjugate exponent needs q > 1, got {q!r}")
    return q / (q - 1.0)

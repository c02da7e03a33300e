"""Finite tabulated summing instances and weighted-family evaluation.

An instance tabulates the two kernels of the abstract summing inequality
over a finite point set: ``s_table[j, v]`` is the left kernel at point j and
column v, ``r_table[j, w]`` the right kernel.  Families of points with
repetitions are multiplicity vectors (never materialized repeated rows), so
enumeration budgets count total multiplicity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    DegenerateFamily,
    DimensionMismatch,
    EmptyInstance,
    OutOfRange,
    ZeroDenominator,
)

__all__ = [
    "SummingInstance",
    "WeightVector",
    "lhs_value",
    "rhs_value",
    "family_ratio",
    "enumerate_families",
    "clear_denominators",
]


def _check_table(name: str, table: np.ndarray) -> np.ndarray:
    table = np.asarray(table, dtype=float)
    if table.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {table.shape}")
    if not np.isfinite(table).all() or (table < 0.0).any():
        raise OutOfRange(f"{name} entries must be finite and >= 0")
    return table


@dataclass(frozen=True, eq=False)
class SummingInstance:
    """Tabulation of both kernels over n points, |V| and |W| columns."""

    point_ids: tuple[str, ...]
    v_ids: tuple[str, ...]
    w_ids: tuple[str, ...]
    s_table: np.ndarray  # n x |V|
    r_table: np.ndarray  # n x |W|

    def __post_init__(self):
        s = _check_table("s_table", self.s_table)
        r = _check_table("r_table", self.r_table)
        pts = tuple(str(x) for x in self.point_ids)
        vs = tuple(str(x) for x in self.v_ids)
        ws = tuple(str(x) for x in self.w_ids)
        if len(pts) < 1 or len(vs) < 1 or len(ws) < 1:
            raise EmptyInstance("need at least one point, one v and one w")
        if s.shape != (len(pts), len(vs)):
            raise DimensionMismatch(
                f"s_table shape {s.shape} != ({len(pts)}, {len(vs)})"
            )
        if r.shape != (len(pts), len(ws)):
            raise DimensionMismatch(
                f"r_table shape {r.shape} != ({len(pts)}, {len(ws)})"
            )
        s.flags.writeable = False
        r.flags.writeable = False
        object.__setattr__(self, "point_ids", pts)
        object.__setattr__(self, "v_ids", vs)
        object.__setattr__(self, "w_ids", ws)
        object.__setattr__(self, "s_table", s)
        object.__setattr__(self, "r_table", r)

    @property
    def n(self) -> int:
        return len(self.point_ids)

    @classmethod
    def from_tables(cls, s_table, r_table) -> "SummingInstance":
        s = np.asarray(s_table, dtype=float)
        r = np.asarray(r_table, dtype=float)
        if s.ndim != 2 or r.ndim != 2:
            raise DimensionMismatch("tables must be 2-D")
        return cls(
            point_ids=tuple(f"z{j}" for j in range(s.shape[0])),
            v_ids=tuple(f"v{j}" for j in range(s.shape[1])),
            w_ids=tuple(f"w{j}" for j in range(r.shape[1])),
            s_table=s,
            r_table=r,
        )


@dataclass(frozen=True)
class WeightVector:
    """Family weights eta_j >= 0; integer entries mean a genuine multiset."""

    weights: tuple[float, ...]

    def __post_init__(self):
        clean = tuple(float(w) for w in self.weights)
        for j, w in enumerate(clean):
            if not math.isfinite(w) or w < 0.0:
                raise OutOfRange(f"weights[{j}] must be finite and >= 0")
        object.__setattr__(self, "weights", clean)

    @property
    def integral(self) -> bool:
        return all(w == math.floor(w) for w in self.weights)

    @property
    def total(self) -> float:
        return math.fsum(self.weights)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)

    def __len__(self) -> int:
        return len(self.weights)


def _eta_array(inst: SummingInstance, eta: WeightVector | Sequence[float]) -> np.ndarray:
    arr = eta.as_array() if isinstance(eta, WeightVector) else np.asarray(eta, dtype=float)
    if arr.shape != (inst.n,):
        raise DimensionMismatch(f"family length {arr.shape} != {inst.n} points")
    return arr


def lhs_value(inst: SummingInstance, q: float, eta) -> float:
    """max over v of sum_j eta_j * s_table[j, v]**q."""
    if q <= 0.0:
        raise OutOfRange(f"q must be > 0, got {q}")
    arr = _eta_array(inst, eta)
    return float((arr @ np.power(inst.s_table, q)).max())


def rhs_value(inst: SummingInstance, p: float, eta) -> float:
    """max over w of sum_j eta_j * r_table[j, w]**p."""
    if p <= 0.0:
        raise OutOfRange(f"p must be > 0, got {p}")
    arr = _eta_array(inst, eta)
    return float((arr @ np.power(inst.r_table, p)).max())


def family_ratio(inst: SummingInstance, q: float, p: float, alpha: float, eta) -> float:
    """lhs**(1/alpha) / rhs for one family; the constant must dominate this.

    Raises ZeroDenominator when rhs = 0 < lhs (no finite constant exists;
    the witness family travels on the exception) and DegenerateFamily on 0/0
    (the family imposes no constraint and must be skipped).
    """
    lhs = lhs_value(inst, q, eta)
    rhs = rhs_value(inst, p, eta)
    if rhs == 0.0:
        if lhs == 0.0:
            raise DegenerateFamily("family has lhs = rhs = 0")
        raise ZeroDenominator(
            "family has positive lhs but zero rhs; instance is not summing",
            family=eta if isinstance(eta, WeightVector) else WeightVector(tuple(eta)),
        )
    return math.pow(lhs, 1.0 / alpha) / rhs


def _compositions_desc(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions_desc(total - first, parts - 1):
            yield (first,) + rest


def enumerate_families(n: int, budget: int) -> Iterator[WeightVector]:
    """Every integer family with 1 <= total multiplicity <= budget, once.

    Order: ascending total multiplicity, lexicographically descending within
    each total, e.g. n=2, budget=2 gives (1,0),(0,1),(2,0),(1,1),(0,2).
    """
    if n < 1 or budget < 1:
        raise OutOfRange(f"need n >= 1 and budget >= 1, got n={n}, budget={budget}")
    for total in range(1, budget + 1):
        for comp in _compositions_desc(total, n):
            yield WeightVector(tuple(float(c) for c in comp))


def clear_denominators(weights, max_denominator: int = 2**31) -> WeightVector:
    """Integer family approximating the direction of a real weight vector.

    Rounds each weight to a rational with bounded denominator and clears the
    common denominator.  Ratios of interest are invariant under positive
    scaling of the family, so the integer family realizes the real-weighted
    value up to the rounding of the rationals.
    """
    arr = np.asarray(
        weights.as_array() if isinstance(weights, WeightVector) else weights, dtype=float
    )
    if (arr < 0.0).any() or not np.isfinite(arr).all():
        raise OutOfRange("weights must be finite and >= 0")
    top = float(arr.max())
    if top <= 0.0:
        raise OutOfRange("cannot integerize the zero family")
    fracs = [Fraction(float(w) / top).limit_denominator(max_denominator) for w in arr]
    denom = 1
    for f in fracs:
        denom = denom * f.denominator // math.gcd(denom, f.denominator)
    ints = [int(f * denom) for f in fracs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return WeightVector(tuple(float(v) for v in ints))

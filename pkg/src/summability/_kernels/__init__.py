"""Family-scan kernels: compiled core with a pure-Python fallback.

The compiled extension is selected at import when available; both backends
implement the identical algorithm with the identical floating-point
operation order, so results are bit-for-bit equal (tested).  Use
``backend_name()`` to see which one is active and pass ``backend=`` to
``scan_table`` to force one (the benchmark does).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _scan_py

try:
    from . import _scan_cy

    _HAS_COMPILED = True
except ImportError:  # extension not built; fall back
    _scan_cy = None
    _HAS_COMPILED = False

__all__ = ["ScanOutcome", "scan_table", "backend_name", "available_backends"]

_BACKENDS = {"python": _scan_py.scan}
if _HAS_COMPILED:
    _BACKENDS["compiled"] = _scan_cy.scan
_DEFAULT = "compiled" if _HAS_COMPILED else "python"

RATIO_MAX = 0
SLACK_MIN = 1


@dataclass(frozen=True)
class ScanOutcome:
    """Result of a family scan.

    ``value`` is the max ratio (mode RATIO_MAX) or the min relative slack
    (mode SLACK_MIN); ``eta`` the tie-broken witness family; ``families``
    counts every nonzero family enumerated and ``degenerate`` the 0/0 ones
    skipped in ratio mode.  ``zero_denominator`` flags an aborted ratio scan
    (some family has lhs > 0 with rhs = 0, so no finite constant exists).
    """

    value: float
    eta: np.ndarray | None
    families: int
    degenerate: int
    zero_denominator: bool


def backend_name() -> str:
    return _DEFAULT


def available_backends() -> tuple[str, ...]:
    return tuple(_BACKENDS)


def scan_table(
    table: np.ndarray,
    starts,
    exps,
    budget: int,
    mode: int,
    constant: float = 0.0,
    backend: str | None = None,
) -> ScanOutcome:
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    fn = _BACKENDS[backend or _DEFAULT]
    status, value, eta, families, degenerate = fn(
        np.ascontiguousarray(table, dtype=np.float64),
        np.asarray(starts, dtype=np.int64),
        np.asarray(exps, dtype=np.float64),
        int(budget),
        int(mode),
        float(constant),
    )
    return ScanOutcome(
        value=float(value),
        eta=None if eta is None else np.asarray(eta, dtype=np.int64),
        families=int(families),
        degenerate=int(degenerate),
        zero_denominator=bool(status == 1),
    )

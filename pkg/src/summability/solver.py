"""Self-contained numerical plumbing: dense LP, simplex-game minimax, bisection.

The LP solver is a two-phase dense tableau simplex with Bland's rule.  The
instances in this package are tiny (a few hundred variables at most), so a
dense tableau with deterministic pivoting buys reproducible vertex solutions
and exact-looking witnesses, which matter more here than speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import BracketInvalid, NumericalFailure, OutOfRange

__all__ = [
    "LpProblem",
    "LpSolution",
    "solve_lp",
    "kkt_residuals",
    "MinimaxProblem",
    "MinimaxResult",
    "mwu_minimax",
    "bisect",
    "zero_sum_value_lp",
]

_PIVOT_EPS = 1e-10
_FEAS_EPS = 1e-9
_MAX_PIVOTS = 10_000


@dataclass(frozen=True)
class LpProblem:
    """maximize objective @ x  subject to  constraint_matrix @ x <= bounds, x >= 0."""

    objective: np.ndarray
    constraint_matrix: np.ndarray
    bounds: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float)
        A = np.asarray(self.constraint_matrix, dtype=float)
        b = np.asarray(self.bounds, dtype=float)
        if A.ndim != 2 or c.ndim != 1 or b.ndim != 1:
            raise OutOfRange("objective and bounds must be vectors, matrix 2-D")
        m, n = A.shape
        if m < 1 or n < 1 or c.shape[0] != n or b.shape[0] != m:
            raise OutOfRange(f"inconsistent LP shapes: A {A.shape}, c {c.shape}, b {b.shape}")
        if not (np.isfinite(A).all() and np.isfinite(c).all() and np.isfinite(b).all()):
            raise OutOfRange("LP data must be finite")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "constraint_matrix", A)
        object.__setattr__(self, "bounds", b)


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal" | "unbounded" | "infeasible"
    value: float
    x: np.ndarray | None
    duals: np.ndarray | None
    pivots: int


def _pivot(T: np.ndarray, r: int, c: int) -> None:
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def _run_simplex(T: np.ndarray, basis: list[int], ncols: int, pivots: int) -> tuple[str, int]:
    """Phase loop on tableau T (row 0 = reduced costs, last col = rhs).

    Bland's rule: entering = lowest-index column with positive reduced cost,
    leaving = min-ratio row, ties broken by lowest basis variable index.
    """
    m = T.shape[0] - 1
    while True:
        enter = -1
        for j in range(ncols):
            if T[0, j] > _PIVOT_EPS:
                enter = j
                break
        if enter < 0:
            return "optimal", pivots
        leave = -1
        best_ratio = math.inf
        for i in range(1, m + 1):
            a = T[i, enter]
            if a > _PIVOT_EPS:
                ratio = T[i, -1] / a
                if ratio < best_ratio - _PIVOT_EPS or (
                    abs(ratio - best_ratio) <= _PIVOT_EPS
                    and (leave < 0 or basis[i - 1] < basis[leave - 1])
                ):
                    best_ratio = ratio
                    leave = i
        if leave < 0:
            return "unbounded", pivots
        _pivot(T, leave, enter)
        basis[leave - 1] = enter
        pivots += 1
        if pivots > _MAX_PIVOTS:
            raise NumericalFailure(f"simplex exceeded {_MAX_PIVOTS} pivots")


def solve_lp(problem: LpProblem) -> LpSolution:
    """Two-phase tableau simplex with Bland's rule; deterministic.

    Optimal solutions satisfy the constraints and KKT complementarity within
    1e-9 on the problem sizes used here (see ``kkt_residuals``).  Dual values
    are recomputed from the final basis against the original data so they are
    free of tableau drift.
    """
    c = problem.objective
    A = problem.constraint_matrix
    b = problem.bounds
    m, n = A.shape

    # Equality system: rows with b < 0 are negated so the rhs is nonnegative.
    neg = b < 0.0
    sysA = np.where(neg[:, None], -A, A)
    sysb = np.where(neg, -b, b)
    slack = np.where(neg, -1.0, 1.0)  # coefficient of the slack variable per row

    n_art = int(neg.sum())
    ncols = n + m + n_art
    T = np.zeros((m + 1, ncols + 1))
    T[1:, :n] = sysA
    T[1:, n : n + m] = np.diag(slack)
    T[1:, -1] = sysb
    basis: list[int] = []
    art_col = n + m
    for i in range(m):
        if neg[i]:
            T[1 + i, art_col] = 1.0
            basis.append(art_col)
            art_col += 1
        else:
            basis.append(n + i)
    pivots = 0

    if n_art:
        # Phase 1: maximize -sum(artificials).
        T[0, :] = 0.0
        T[0, n + m : n + m + n_art] = -1.0
        for i in range(m):
            T[0] -= T[0, basis[i]] * T[1 + i]
        status, pivots = _run_simplex(T, basis, ncols, pivots)
        # Row 0 keeps the negated objective, so phase-1 optimum is -T[0, -1].
        if -T[0, -1] < -_FEAS_EPS:
            return LpSolution("infeasible", -math.inf, None, None, pivots)
        # Pivot lingering zero-level artificials out of the basis.
        for i in range(m):
            if basis[i] >= n + m:
                done = False
                for j in range(n + m):
                    if abs(T[1 + i, j]) > _PIVOT_EPS:
                        _pivot(T, 1 + i, j)
                        basis[i] = j
                        done = True
                        break
                if not done:
                    T[1 + i, :] = 0.0  # redundant row

    # Phase 2 objective on the original variables.
    T[0, :] = 0.0
    T[0, :n] = c
    for i in range(m):
        if basis[i] < n + m:
            T[0] -= T[0, basis[i]] * T[1 + i]
    # Artificials never re-enter: phase 2 prices over the first n+m columns only.

    status, pivots = _run_simplex(T, basis, n + m, pivots)
    if status == "unbounded":
        return LpSolution("unbounded", math.inf, None, None, pivots)

    x = np.zeros(n)
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[1 + i, -1]

    # Duals from the final basis and the original data.
    cols = np.zeros((m, m))
    cb = np.zeros(m)
    for i, j in enumerate(basis):
        if j < n:
            cols[:, i] = sysA[:, j]
            cb[i] = c[j]
        elif j < n + m:
            cols[:, i] = 0.0
            cols[j - n, i] = slack[j - n]
        else:  # zeroed redundant row's artificial
            cols[i, i] = 1.0
    try:
        mu = np.linalg.solve(cols.T, cb)
    except np.linalg.LinAlgError:
        mu = np.linalg.lstsq(cols.T, cb, rcond=None)[0]
    duals = np.where(neg, -mu, mu)
    duals = np.where(np.abs(duals) < 1e-13, 0.0, duals)
    value = float(c @ x)
    return LpSolution("optimal", value, x, duals, pivots)


def kkt_residuals(problem: LpProblem, sol: LpSolution) -> dict[str, float]:
    """Primal/dual feasibility and complementarity residuals of a solution."""
    A, b, c = problem.constraint_matrix, problem.bounds, problem.objective
    x, y = sol.x, sol.duals
    primal = max(float(np.max(A @ x - b, initial=0.0)), float(np.max(-x, initial=0.0)))
    dual = max(float(np.max(c - A.T @ y, initial=0.0)), float(np.max(-y, initial=0.0)))
    compl_primal = float(np.max(np.abs(y * (b - A @ x)), initial=0.0))
    compl_dual = float(np.max(np.abs(x * (A.T @ y - c)), initial=0.0))
    return {
        "primal": primal,
        "dual": dual,
        "complementarity": max(compl_primal, compl_dual),
        "gap": abs(float(c @ x) - float(b @ y)),
    }


@dataclass(frozen=True)
class MinimaxProblem:
    """Zero-sum minimax over two probability simplices.

    ``payoff`` is either an (n, m) matrix or a deterministic bilinear oracle
    f(x, y); an oracle is tabulated once on the basis vectors.  The row side
    maximizes, the column side minimizes.
    """

    payoff: np.ndarray | Callable[[np.ndarray, np.ndarray], float]
    dims: tuple[int, int] | None = None
    iterations: int = 200_000
    tolerance: float = 1e-4
    step: float | None = None


@dataclass(frozen=True)
class MinimaxResult:
    value: float
    strategies: tuple[np.ndarray, np.ndarray]
    residual: float
    converged: bool
    iterations: int


def _payoff_matrix(p: MinimaxProblem) -> np.ndarray:
    if isinstance(p.payoff, np.ndarray):
        return np.asarray(p.payoff, dtype=float)
    if p.dims is None:
        raise OutOfRange("dims required when payoff is an oracle")
    n, m = p.dims
    M = np.empty((n, m))
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = 1.0
        for j in range(m):
            ej = np.zeros(m)
            ej[j] = 1.0
            M[i, j] = p.payoff(ei, ej)
    return M


def _softmax(logw: np.ndarray) -> np.ndarray:
    w = np.exp(logw - logw.max())
    return w / w.sum()


def mwu_minimax(p: MinimaxProblem) -> MinimaxResult:
    """Multiplicative-weights play for the value of a zero-sum game.

    Exponentiated-gradient (Hedge) updates with the standard
    sqrt(8 ln(dim)/T) base step, uniform initialization and averaged
    iterates.  The update uses the optimistic gradient correction
    (2 g_t - g_{t-1}): plain Hedge converges like 1/sqrt(T), far too slow for
    the 1e-4 residuals required downstream, while the optimistic correction
    converges like 1/T on bilinear payoffs with the same per-step cost.  The
    reported pair is the best (by exactly computed duality gap) of the
    averaged and the current iterates, so the residual is monotone over
    checkpoints.  IterationLimit is non-fatal: the result carries the best
    pair with ``converged=False``.
    """
    M = _payoff_matrix(p)
    n, m = M.shape
    if not np.isfinite(M).all():
        raise OutOfRange("payoffs must be bounded")
    scale = max(1.0, float(np.abs(M).max()))
    T_budget = max(1, p.iterations)
    # The classical sqrt(8 ln(dim)/T) Hedge step pairs with a 1/sqrt(T) gap,
    # which cannot reach 1e-4 residuals in a practical budget; the optimistic
    # update tolerates (and needs) a constant step.
    base = p.step if p.step is not None else 0.25
    eta = min(base, 0.5) / scale

    x = np.full(n, 1.0 / n)
    y = np.full(m, 1.0 / m)
    if n == 1 and m == 1:
        v = float(M[0, 0])
        return MinimaxResult(v, (x, y), 0.0, True, 0)

    logwx = np.zeros(n)
    logwy = np.zeros(m)
    xbar = np.zeros(n)
    ybar = np.zeros(m)
    g_prev = M @ y
    h_prev = M.T @ x

    def gap_of(xc: np.ndarray, yc: np.ndarray) -> float:
        return float((M @ yc).max() - (M.T @ xc).min())

    best_pair = (x.copy(), y.copy())
    best_gap = gap_of(x, y)
    check_every = 50
    t = 0
    for t in range(1, T_budget + 1):
        x = _softmax(logwx)
        y = _softmax(logwy)
        g = M @ y
        h = M.T @ x
        logwx += eta * (2.0 * g - g_prev)
        logwy -= eta * (2.0 * h - h_prev)
        g_prev, h_prev = g, h
        xbar += x
        ybar += y
        if t % check_every == 0 or t == T_budget:
            for xc, yc in ((xbar / t, ybar / t), (x, y)):
                gp = gap_of(xc, yc)
                if gp < best_gap:
                    best_gap = gp
                    best_pair = (xc.copy(), yc.copy())
            if best_gap <= p.tolerance:
                break

    xb, yb = best_pair
    value = 0.5 * (float((M @ yb).max()) + float((M.T @ xb).min()))
    return MinimaxResult(value, best_pair, best_gap, best_gap <= p.tolerance, t)


def bisect(
    feasible: Callable[[float], bool],
    lo: float,
    hi: float,
    tol: float,
    max_iters: int = 60,
) -> float:
    """Smallest feasible point of a monotone predicate, within tol relative.

    Requires feasible(hi) and not feasible(lo); returns the feasible end of
    the final bracket, so the returned value always satisfies the predicate.
    """
    if not lo < hi:
        raise BracketInvalid(f"need lo < hi, got [{lo}, {hi}]")
    if feasible(lo):
        raise BracketInvalid("predicate already feasible at lo")
    if not feasible(hi):
        raise BracketInvalid("predicate infeasible at hi")
    for _ in range(max_iters):
        if hi - lo <= tol * max(1.0, lo):
            break
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


def zero_sum_value_lp(matrix: Sequence[Sequence[float]]) -> tuple[float, np.ndarray, np.ndarray]:
    """Game value and optimal mixed strategies via one LP and its duals.

    Shift the payoffs positive, solve max sum(w) s.t. M'w <= 1 for the
    column player; the row strategy comes out of the dual vector.
    """
    M = np.asarray(matrix, dtype=float)
    if M.ndim != 2:
        raise OutOfRange("payoff matrix must be 2-D")
    shift = 1.0 - float(M.min())
    Mp = M + shift
    n, m = Mp.shape
    sol = solve_lp(LpProblem(np.ones(m), Mp, np.ones(n)))
    if sol.status != "optimal":
        raise NumericalFailure(f"zero-sum LP ended with status {sol.status}")
    total = float(sol.x.sum())
    vp = 1.0 / total
    y = sol.x * vp
    dual_total = float(sol.duals.sum())
    x = sol.duals / dual_total
    return vp - shift, x, y

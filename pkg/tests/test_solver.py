import math

import numpy as np
import pytest
from scipy.optimize import linprog

from summability.errors import BracketInvalid
from summability.solver import (
    LpProblem,
    MinimaxProblem,
    bisect,
    kkt_residuals,
    mwu_minimax,
    solve_lp,
    zero_sum_value_lp,
)


def random_lp(seed: int) -> LpProblem:
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 7))
    n = int(rng.integers(1, 7))
    return LpProblem(
        rng.uniform(0.0, 2.0, size=n),
        rng.uniform(0.0, 2.0, size=(m, n)) + 0.05,
        rng.uniform(0.5, 2.0, size=m),
    )


def test_lp_trivial_examples():
    sol = solve_lp(LpProblem(np.array([1.0]), np.array([[1.0]]), np.array([1.0])))
    assert sol.status == "optimal" and sol.value == pytest.approx(1.0)
    sol = solve_lp(LpProblem(np.array([1.0, 0.0]), np.array([[0.0, 1.0]]), np.array([1.0])))
    assert sol.status == "unbounded"
    sol = solve_lp(LpProblem(np.array([1.0]), np.array([[1.0]]), np.array([-1.0])))
    assert sol.status == "infeasible"


def test_lp_vs_scipy_oracle():
    for seed in range(40):
        p = random_lp(seed)
        ours = solve_lp(p)
        ref = linprog(-p.objective, A_ub=p.constraint_matrix, b_ub=p.bounds,
                      bounds=[(0, None)] * p.objective.size, method="highs")
        assert ours.status == "optimal" and ref.status == 0
        assert ours.value == pytest.approx(-ref.fun, abs=1e-8, rel=1e-8)


def test_lp_kkt_within_tolerance():
    for seed in range(40):
        p = random_lp(seed)
        sol = solve_lp(p)
        res = kkt_residuals(p, sol)
        assert res["primal"] <= 1e-9
        assert res["dual"] <= 1e-9
        assert res["complementarity"] <= 1e-9


def test_lp_primal_equals_constructed_dual():
    # dual of max c.x st Ax <= b: min b.y st A^T y >= c, y >= 0,
    # posed to the same solver as max -b.y st -A^T y <= -c.
    for seed in range(50):
        p = random_lp(seed)
        primal = solve_lp(p)
        dual = solve_lp(LpProblem(-p.bounds, -p.constraint_matrix.T, -p.objective))
        assert dual.status == "optimal"
        assert primal.value == pytest.approx(-dual.value, abs=1e-8, rel=1e-8)


def test_lp_deterministic():
    p = random_lp(7)
    a = solve_lp(p)
    b = solve_lp(p)
    assert a.value == b.value and (a.x == b.x).all() and (a.duals == b.duals).all()


def test_mwu_matching_pennies():
    M = np.array([[1.0, -1.0], [-1.0, 1.0]])
    res = mwu_minimax(MinimaxProblem(M, tolerance=1e-4))
    assert res.converged and abs(res.value) <= 1e-4
    x, y = res.strategies
    assert np.allclose(x, 0.5, atol=0.05) and np.allclose(y, 0.5, atol=0.05)


def test_mwu_single_action():
    res = mwu_minimax(MinimaxProblem(np.array([[3.25]])))
    assert res.value == 3.25 and res.iterations == 0 and res.residual == 0.0


def test_mwu_oracle_payoff():
    M = np.array([[0.0, 2.0], [1.0, 0.0]])
    res = mwu_minimax(
        MinimaxProblem(lambda x, y: float(x @ M @ y), dims=(2, 2), tolerance=1e-5)
    )
    v, _, _ = zero_sum_value_lp(M)
    assert res.value == pytest.approx(v, abs=1e-4)


def test_mwu_vs_lp_seeded_games():
    for seed in range(20):
        rng = np.random.default_rng(seed)
        n, m = rng.integers(2, 9, size=2)
        M = rng.uniform(-1.0, 1.0, size=(int(n), int(m)))
        v, x, y = zero_sum_value_lp(M)
        res = mwu_minimax(MinimaxProblem(M, iterations=100_000, tolerance=1e-4))
        assert res.converged
        assert res.value == pytest.approx(v, abs=1e-4)
        # the LP strategies are an exact equilibrium up to solver tolerance
        assert float((M @ y).max() - (M.T @ x).min()) <= 1e-8


def test_bisect_examples():
    assert bisect(lambda c: c >= 2.0, 0.0, 4.0, 1e-9) == pytest.approx(2.0, abs=1e-8)
    with pytest.raises(BracketInvalid):
        bisect(lambda c: True, 0.0, 4.0, 1e-9)
    with pytest.raises(BracketInvalid):
        bisect(lambda c: False, 0.0, 4.0, 1e-9)


def test_bisect_returns_feasible_end():
    calls = []

    def feas(c):
        calls.append(c)
        return c >= math.pi

    got = bisect(feas, 0.0, 8.0, 1e-7)
    assert feas(got) and got - math.pi <= 1e-6

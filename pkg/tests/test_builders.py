import math

import numpy as np
import pytest

from summability.builders import (
    OperatorSpec,
    TensorSpec,
    build_cohen,
    build_linfty_linear,
    build_random_summing,
    build_sampled_dual,
    build_semi_integral,
    build_strongly_summing_sampled,
    build_weighted_dominated,
    default_grid,
)
from summability.errors import OutOfRange, ShapeMismatch, UnsupportedDomainNorm
from summability.pdt import (
    MeasureVector,
    best_constant_duality,
    summing_lb_pdt,
    verify_domination,
)


def identity_spec(d: int) -> OperatorSpec:
    return OperatorSpec(matrix=tuple(tuple(float(i == j) for j in range(d))
                                     for i in range(d)))


def test_default_grid_shape():
    grid = default_grid(2)
    assert grid[0] == (1.0, 0.0) and grid[1] == (0.0, 1.0)
    assert len(grid) == 2 + 4
    assert len(default_grid(6)) == 64  # capped


def test_linfty_atoms_collapse_signs():
    build = build_linfty_linear(identity_spec(2), p=2.0)
    assert len(build.pdt.atom_sets[0]) == 2  # +-e_i collapsed


def test_linfty_rejects_non_sup_domain():
    with pytest.raises(UnsupportedDomainNorm):
        build_linfty_linear(OperatorSpec(matrix=((1.0,),), domain_norm="two"))


def test_zero_matrix_best_constant_zero():
    spec = OperatorSpec(matrix=((0.0, 0.0), (0.0, 0.0)))
    build = build_linfty_linear(spec, p=2.0)
    assert best_constant_duality(build.pdt).constant == 0.0


def test_identity_d2_bracket_sqrt2():
    build = build_linfty_linear(identity_spec(2), p=2.0)
    lb = summing_lb_pdt(build.pdt, budget=6)
    ub = best_constant_duality(build.pdt, tol=1e-7)
    assert lb.constant == pytest.approx(math.sqrt(2.0), rel=1e-9)
    assert ub.constant == pytest.approx(math.sqrt(2.0), rel=1e-7)


def test_sampled_dual_deterministic_and_below_extreme():
    spec = OperatorSpec(matrix=identity_spec(3).matrix)
    a = build_sampled_dual(spec, samples=50, seed=9)
    b = build_sampled_dual(spec, samples=50, seed=9)
    assert all((ta == tb).all() for ta, tb in zip(a.r_tables, b.r_tables))
    assert a.approximate

    # sampled dual-ball points never beat the extreme-point maximum
    exact = build_linfty_linear(spec, p=2.0).pdt
    sampled = build_sampled_dual(spec, samples=10_000, seed=1, p=2.0)
    eta = np.ones(exact.n_points)
    p = 2.0
    exact_max = (eta @ np.power(exact.r_tables[0], p)).max()
    sampled_max = (eta @ np.power(sampled.r_tables[0], p)).max()
    assert sampled_max <= exact_max + 1e-12


def test_sampled_dual_single_atom():
    inst = build_sampled_dual(OperatorSpec(matrix=((1.0, 0.0),)), samples=1, seed=0)
    assert len(inst.atom_sets[0]) == 1


def test_semi_integral_atom_count():
    spec = TensorSpec(order=2, dims=(2, 2), coefficients=((1.0, 0.0), (0.0, 1.0)))
    build = build_semi_integral(spec, p=2.0)
    assert len(build.pdt.atom_sets[0]) == 4  # 2x2 basis pairs
    assert build.multiplicative is not None


def test_semi_integral_rank_one_constant_one():
    # T = e1 (x) e1: the s-value coincides with one r-column
    spec = TensorSpec(order=2, dims=(2, 2), coefficients=((1.0, 0.0), (0.0, 0.0)))
    build = build_semi_integral(spec, p=2.0)
    cert = best_constant_duality(build.pdt, tol=1e-9)
    assert cert.constant == pytest.approx(1.0, rel=1e-9)
    atoms = build.pdt.atom_sets[0]
    rep = verify_domination(build.pdt, 1.0, [MeasureVector.dirac(atoms, 0)])
    assert rep.passed


def test_cohen_exponent_identity():
    spec = TensorSpec(order=2, dims=(2, 2),
                      coefficients=(((1.0, 0.0), (0.0, 1.0)),
                                    ((0.0, 1.0), (1.0, 0.0))),
                      target_norm="one")
    inst = build_cohen(spec, q=2.0)
    assert inst.exponents.parts == (2.0, 2.0)
    assert inst.exponents.combined == 1.0
    assert inst.t == 2 and len(inst.atom_sets[0]) == 1
    with pytest.raises(OutOfRange):
        build_cohen(spec, q=1.0)


def test_cohen_zero_functional_rows_unconstraining():
    spec = TensorSpec(order=2, dims=(2, 2),
                      coefficients=(((1.0, 0.0), (0.0, 1.0)),
                                    ((0.0, 1.0), (1.0, 0.0))),
                      target_norm="one",
                      y_grid=((0.0, 0.0), (1.0, 0.0)))
    inst = build_cohen(spec, q=2.0)
    zero_rows = [j for j in range(inst.n_points)
                 if inst.r_tables[1][j].max() == 0.0]
    assert zero_rows and all(inst.s_values[j] == 0.0 for j in zero_rows)


def test_anchored_linear_matches_unanchored():
    # for an order-1 tensor (a linear map), f(a+x)-f(a) = f(x)
    coef = ((1.0, 2.0), (0.5, -1.0))  # 2 -> 2 linear map as a (2,2) table
    plain = TensorSpec(order=1, dims=(2,), coefficients=coef)
    anchored = TensorSpec(order=1, dims=(2,), coefficients=coef,
                          anchor=((0.7, -0.3),))
    b1 = build_semi_integral(plain, p=2.0)
    b2 = build_semi_integral(anchored, p=2.0)
    assert np.allclose(b1.pdt.s_values, b2.pdt.s_values, rtol=1e-12, atol=1e-12)
    assert b2.multiplicative is None  # translated evaluation is not scalable


def test_weighted_all_ones_reduces_to_unweighted():
    spec = TensorSpec(order=2, dims=(2, 2), coefficients=((1.0, 0.5), (0.25, 1.0)))
    weighted = build_weighted_dominated(spec, qs=[2.0, 2.0], weight_grid=[1.0])
    semi = build_semi_integral(spec, p=2.0)
    assert np.allclose(np.sort(weighted.s_values), np.sort(semi.pdt.s_values))


def test_weighted_zero_weight_degenerate_rows():
    spec = TensorSpec(order=2, dims=(2, 2), coefficients=((1.0, 0.5), (0.25, 1.0)))
    inst = build_weighted_dominated(spec, qs=[2.0, 2.0], weight_grid=[0.0, 1.0])
    for j in range(inst.n_points):
        r_zero = any(inst.r_tables[k][j].max() == 0.0 for k in range(inst.t))
        if r_zero:
            assert inst.s_values[j] == 0.0


def test_weighted_shape_errors():
    spec = TensorSpec(order=2, dims=(2, 2), coefficients=((1.0, 0.5), (0.25, 1.0)))
    with pytest.raises(ShapeMismatch):
        build_weighted_dominated(spec, qs=[2.0], weight_grid=[1.0])
    with pytest.raises(ShapeMismatch):
        build_weighted_dominated(spec, qs=[2.0, 2.0], weight_grid=[])


def test_strongly_summing_sampled():
    spec = TensorSpec(order=2, dims=(2, 2), coefficients=((1.0, 0.5), (0.25, 1.0)))
    a = build_strongly_summing_sampled(spec, samples=16, seed=3)
    b = build_strongly_summing_sampled(spec, samples=16, seed=3)
    assert a.approximate
    assert (a.r_tables[0] == b.r_tables[0]).all()
    # unit-norm forms: r-values never exceed the product of sup norms
    grid = spec.test_grids
    for row, combo in enumerate(
        [(i, j) for i in range(len(grid[0])) for j in range(len(grid[1]))]
    ):
        denom = (np.abs(grid[0][combo[0]]).max() * np.abs(grid[1][combo[1]]).max())
        assert a.r_tables[0][row].max() <= denom + 1e-9


def test_random_summing_deterministic():
    a = build_random_summing(4, 3, 2, 2, 2.0)
    b = build_random_summing(4, 3, 2, 2, 2.0)
    assert (a.s_table == b.s_table).all() and (a.r_table == b.r_table).all()
    zero = build_random_summing(4, 3, 2, 2, 0.0)
    assert zero.s_table.max() == 0.0 and zero.r_table.max() == 0.0


def test_semi_integral_duality_sandwich():
    for seed in range(5):
        rng = np.random.default_rng(seed)
        coef = rng.uniform(-1.0, 1.0, size=(2, 2, 2))
        spec = TensorSpec(order=2, dims=(2, 2),
                          coefficients=tuple(tuple(tuple(r) for r in m) for m in coef))
        build = build_semi_integral(spec, p=2.0)
        tol = 1e-7
        ub = best_constant_duality(build.pdt, tol=tol)
        lb = summing_lb_pdt(build.pdt, budget=4)
        assert lb.constant <= ub.constant * (1.0 + tol) + 1e-12


def test_sign_collapse_soundness():
    # duplicating every atom with its sign flip (same |phi(x)| columns)
    # changes no computed constant
    from summability.core import harmonic_combine
    from summability.pdt import PdtInstance

    build = build_linfty_linear(identity_spec(3), p=2.0)
    base = build.pdt
    doubled = PdtInstance(
        atom_sets=(tuple(f"+{a}" for a in base.atom_sets[0])
                   + tuple(f"-{a}" for a in base.atom_sets[0]),),
        exponents=harmonic_combine([2.0]),
        labels=base.labels,
        s_values=base.s_values,
        r_tables=(np.hstack([base.r_tables[0], base.r_tables[0]]),),
    )
    for budget in (1, 3):
        assert summing_lb_pdt(doubled, budget).constant == pytest.approx(
            summing_lb_pdt(base, budget).constant, rel=1e-12
        )
    assert best_constant_duality(doubled).constant == pytest.approx(
        best_constant_duality(base).constant, rel=1e-9
    )

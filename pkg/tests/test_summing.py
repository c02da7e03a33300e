import numpy as np
import pytest

from conftest import oracle_summing_max_ratio, random_summing_sized
from summability.builders import build_random_summing
from summability.errors import NotSumming, OutOfRange
from summability.instance import SummingInstance, clear_denominators, family_ratio
from summability.summing import summing_constant_bruteforce, summing_constant_exact


def test_exact_identity_tables():
    rng = np.random.default_rng(1)
    s = rng.uniform(0.1, 2.0, size=(4, 2))
    inst = SummingInstance.from_tables(s, s)
    cert = summing_constant_exact(inst, 1.5, 1.5)
    assert cert.constant == pytest.approx(1.0, rel=1e-9)
    assert cert.kind == "ExactLP"


def test_exact_single_cell():
    inst = SummingInstance.from_tables([[2.0]], [[1.0]])
    assert summing_constant_exact(inst, 1.0, 1.0).constant == pytest.approx(2.0)


def test_exact_vs_bruteforce_oracle_seed0():
    # frozen seeded case whose budget-8 enumeration attains the LP value
    inst = build_random_summing(0, 3, 2, 2, 2.0)
    lp = summing_constant_exact(inst, 2.0, 1.0)
    oracle = oracle_summing_max_ratio(inst, 2.0, 1.0, 1.0, budget=8)
    assert abs(lp.constant - oracle) <= 1e-6 * max(1.0, lp.constant)
    assert lp.constant == pytest.approx(2.0423340430223393, rel=1e-12)


def test_exact_requires_q_p_at_least_one():
    inst = SummingInstance.from_tables([[1.0]], [[1.0]])
    with pytest.raises(OutOfRange):
        summing_constant_exact(inst, 0.5, 1.0)


def test_not_summing_detected():
    inst = SummingInstance.from_tables([[1.0], [1.0]], [[1.0], [0.0]])
    with pytest.raises(NotSumming) as exc:
        summing_constant_exact(inst, 1.0, 1.0)
    assert exc.value.family.weights == (0.0, 1.0)
    with pytest.raises(NotSumming):
        summing_constant_bruteforce(inst, 1.0, 1.0, budget=2)


def test_bruteforce_examples():
    inst = SummingInstance.from_tables([[2.0]], [[1.0]])
    cert = summing_constant_bruteforce(inst, 1.0, 1.0, alpha=1.0, budget=5)
    assert cert.constant == pytest.approx(2.0)
    assert cert.witness.weights == (1.0,)

    inst = SummingInstance.from_tables([[1.0]], [[1.0]])
    cert = summing_constant_bruteforce(inst, 1.0, 1.0, alpha=2.0, budget=4)
    assert cert.constant == pytest.approx(1.0)  # ratio decays like t**(-1/2)
    assert cert.witness.weights == (1.0,)


def test_bruteforce_all_degenerate():
    inst = build_random_summing(5, 3, 2, 2, 0.0)
    cert = summing_constant_bruteforce(inst, 1.0, 1.0, budget=3)
    assert cert.constant == 0.0 and cert.witness is None


def test_bruteforce_below_exact_and_monotone_in_budget():
    for seed in range(12):
        inst = random_summing_sized(seed)
        lp = summing_constant_exact(inst, 2.0, 1.0)
        prev = 0.0
        for budget in (1, 2, 4, 8):
            bf = summing_constant_bruteforce(inst, 2.0, 1.0, budget=budget)
            assert bf.constant <= lp.constant + 1e-9
            assert bf.constant >= prev - 1e-12
            prev = bf.constant


def test_witness_reproduces_constant():
    for seed in range(10):
        inst = random_summing_sized(seed)
        cert = summing_constant_exact(inst, 2.0, 1.0)
        if cert.witness.total == 0.0:
            continue
        realized = family_ratio(inst, 2.0, 1.0, 1.0, cert.witness)
        assert realized == pytest.approx(cert.constant, rel=1e-9)


def test_witness_integerization_within_1e6():
    for seed in range(10):
        inst = random_summing_sized(seed)
        cert = summing_constant_exact(inst, 2.0, 1.0)
        if cert.witness.total == 0.0:
            continue
        fam = clear_denominators(cert.witness)
        realized = family_ratio(inst, 2.0, 1.0, 1.0, fam)
        assert realized == pytest.approx(cert.constant, rel=1e-6)


def test_invariance_row_permutation_and_duplication():
    rng = np.random.default_rng(11)
    s = rng.uniform(0.0, 2.0, size=(4, 2))
    r = rng.uniform(0.1, 2.0, size=(4, 2))
    base = summing_constant_exact(SummingInstance.from_tables(s, r), 2.0, 1.0)
    perm = rng.permutation(4)
    share = summing_constant_exact(SummingInstance.from_tables(s[perm], r[perm]), 2.0, 1.0)
    assert share.constant == pytest.approx(base.constant, rel=1e-10)
    dup = summing_constant_exact(
        SummingInstance.from_tables(np.vstack([s, s[:1]]), np.vstack([r, r[:1]])),
        2.0, 1.0,
    )
    assert dup.constant == pytest.approx(base.constant, rel=1e-10)


def test_scaling_s_table_scales_constant_by_lambda_q():
    rng = np.random.default_rng(12)
    s = rng.uniform(0.0, 2.0, size=(3, 2))
    r = rng.uniform(0.1, 2.0, size=(3, 2))
    q, lam = 2.0, 1.7
    base = summing_constant_exact(SummingInstance.from_tables(s, r), q, 1.0)
    scaled = summing_constant_exact(SummingInstance.from_tables(lam * s, r), q, 1.0)
    assert scaled.constant == pytest.approx(lam**q * base.constant, rel=1e-10)

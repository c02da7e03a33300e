import math

import numpy as np
import pytest

from conftest import random_summing_sized
from summability.core import Exponents
from summability.errors import PremiseNotCertified
from summability.inclusion import (
    MultiplicativeInstance,
    predict_inclusion,
    verify_inclusion,
    verify_multilinear_inclusion,
)
from summability.instance import SummingInstance, enumerate_families
from summability.summing import summing_constant_bruteforce


def test_predict_examples():
    cert = predict_inclusion(3.0, Exponents(1, 1, 2, 2))
    assert cert.constant == pytest.approx(9.0) and cert.metadata["alpha"] == 1.0
    assert predict_inclusion(1.0, Exponents(2, 4, 3, 12)).constant == pytest.approx(1.0)
    cert = predict_inclusion(2.0, Exponents(2, 4, 3, 12))
    assert cert.constant == pytest.approx(2.0**1.5) and cert.metadata["alpha"] == 2.0


def test_predict_chain_composes():
    once = predict_inclusion(3.0, Exponents(1, 1, 2, 2)).constant
    twice = predict_inclusion(once, Exponents(2, 2, 4, 4)).constant
    direct = predict_inclusion(3.0, Exponents(1, 1, 4, 4)).constant
    assert twice == pytest.approx(direct, rel=1e-12)


def test_verify_identity_tables_pass():
    rng = np.random.default_rng(0)
    s = rng.uniform(0.1, 2.0, size=(3, 2))
    inst = SummingInstance.from_tables(s, s)
    rep = verify_inclusion(inst, Exponents(1, 1, 2, 2), budget=6)
    assert rep.premise.constant == pytest.approx(1.0, rel=1e-9)
    assert rep.predicted.constant == pytest.approx(1.0, rel=1e-9)
    assert rep.worst_slack >= -1e-9 and rep.passed


def test_verify_premise_not_certified():
    inst = SummingInstance.from_tables([[1.0], [1.0]], [[1.0], [0.0]])
    with pytest.raises(PremiseNotCertified):
        verify_inclusion(inst, Exponents(1, 1, 2, 2))


def test_verify_seeded_sweep_both_tuples():
    for e in (Exponents(1, 1, 2, 2), Exponents(2, 4, 3, 12)):
        for seed in range(25):
            rep = verify_inclusion(random_summing_sized(seed), e, budget=6)
            assert rep.passed, (seed, rep.worst_slack)


def test_alpha_degenerate_when_p_equals_q():
    rep = verify_inclusion(random_summing_sized(4), Exponents(1.5, 1.5, 2.5, 2.5),
                           budget=4)
    assert rep.alpha == 1.0


def test_understated_premise_detected():
    # tight instance: s == r makes the premise constant 1 and the concluded
    # inequality tight, so a 10% understatement must go negative.
    rng = np.random.default_rng(5)
    s = rng.uniform(0.5, 2.0, size=(3, 2))
    inst = SummingInstance.from_tables(s, s)
    rep = verify_inclusion(inst, Exponents(1, 1, 2, 2), budget=5,
                           premise_constant=0.9)
    assert rep.worst_slack < -1e-9 and not rep.passed


def test_multilinear_degenerate_grid_reduces_to_root_form():
    e = Exponents(2, 4, 3, 12)
    inst = random_summing_sized(9)
    minst = MultiplicativeInstance(base=inst, scalar_grid=(1.0,))
    rep = verify_multilinear_inclusion(minst, e, budget=4)
    # premise on the (point, 1.0) rows is the plain root-form brute force
    direct = summing_constant_bruteforce(inst, e.q1, e.p1, alpha=e.q1 / e.p1,
                                         budget=4)
    assert rep.premise.constant == pytest.approx(direct.constant ** (1.0 / e.p1),
                                                 rel=1e-12)
    assert rep.predicted.constant == rep.premise.constant
    assert rep.passed


def test_multilinear_identity_tables_pass():
    rng = np.random.default_rng(1)
    s = rng.uniform(0.1, 2.0, size=(3, 2))
    minst = MultiplicativeInstance(
        base=SummingInstance.from_tables(s, s),
        scalar_grid=(0.25, 0.5, 1.0, 2.0, 4.0),
    )
    rep = verify_multilinear_inclusion(minst, Exponents(1, 1, 2, 2), budget=4)
    assert rep.premise.constant == pytest.approx(1.0, rel=1e-9)
    assert rep.passed


def test_multilinear_constant_never_exceeds_premise():
    e = Exponents(2, 4, 3, 12)
    for seed in range(15):
        minst = MultiplicativeInstance(
            base=random_summing_sized(seed + 100),
            scalar_grid=(0.25, 0.5, 1.0, 2.0, 4.0),
        )
        rep = verify_multilinear_inclusion(minst, e, budget=4)
        assert rep.predicted.constant == rep.premise.constant
        assert rep.worst_slack >= -1e-9, (seed, rep.worst_slack)


def test_multilinear_conclusion_oracle():
    # re-check the worst slack by direct enumeration over expanded rows
    e = Exponents(2, 4, 3, 12)
    minst = MultiplicativeInstance(base=random_summing_sized(3),
                                   scalar_grid=(0.5, 1.0, 2.0))
    budget = 3
    rep = verify_multilinear_inclusion(minst, e, budget=budget)
    s2, r2 = minst.expanded_tables(e.q2, e.p2)
    C = rep.predicted.constant
    worst = math.inf
    for fam in enumerate_families(s2.shape[0], budget):
        eta = np.asarray(fam.weights)
        lhs = float((eta @ s2).max()) ** (1.0 / e.q2)
        rhs = float((eta @ r2).max()) ** (1.0 / e.p2)
        worst = min(worst, (C * rhs - lhs) / max(1.0, C * rhs))
    assert rep.worst_slack == pytest.approx(worst, rel=1e-12, abs=1e-12)


def test_report_counts_families():
    inst = random_summing_sized(2)
    budget = 4
    rep = verify_inclusion(inst, Exponents(1, 1, 2, 2), budget=budget)
    assert rep.families_checked == math.comb(inst.n + budget, budget) - 1

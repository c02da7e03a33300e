import math

import pytest
from hypothesis import given, strategies as st

from summability.core import (
    Exponents,
    check_admissible,
    compute_alpha,
    conjugate_exponent,
    harmonic_combine,
    lemma_yy_gap,
)
from summability.errors import (
    EmptyParts,
    InadmissibleExponents,
    LengthMismatch,
    OutOfRange,
)

finite_pos = st.floats(min_value=0.1, max_value=16.0)


def test_admissible_examples():
    assert check_admissible(Exponents(1, 1, 2, 2))
    assert not check_admissible(Exponents(1, 2, 2, 4))  # 1/2 > 1/4
    assert check_admissible(Exponents(2, 4, 3, 12))  # 1/4 <= 1/4


def test_exponents_validation():
    with pytest.raises(OutOfRange):
        Exponents(0.0, 1, 1, 1)
    with pytest.raises(OutOfRange):
        Exponents(1, math.inf, 1, 1)


@given(p1=finite_pos, q1=finite_pos, p2=finite_pos, q2=finite_pos,
       bump=st.floats(min_value=0.0, max_value=8.0))
def test_admissible_monotone_in_q2(p1, q1, p2, q2, bump):
    e = Exponents(p1, q1, p2, q2)
    if check_admissible(e):
        assert check_admissible(Exponents(p1, q1, p2, q2 + bump))


@given(p1=finite_pos, q1=finite_pos, p2=finite_pos, q2=finite_pos,
       cut=st.floats(min_value=0.0, max_value=0.9))
def test_admissible_antitone_in_q1(p1, q1, p2, q2, cut):
    e = Exponents(p1, q1, p2, q2)
    if check_admissible(e):
        smaller = max(q1 * (1.0 - cut), p1)
        assert check_admissible(Exponents(p1, smaller, p2, q2))


def test_alpha_examples():
    a = compute_alpha(Exponents(1, 1, 2, 2))
    assert a.alpha == 1.0 and a.constant_exponent == 2.0
    a = compute_alpha(Exponents(2, 4, 3, 12))
    assert a.alpha == 2.0 and a.constant_exponent == 1.5
    a = compute_alpha(Exponents(3, 3, 3, 3))
    assert a.alpha == 1.0 and a.constant_exponent == 1.0


def test_alpha_requires_admissible():
    with pytest.raises(InadmissibleExponents):
        compute_alpha(Exponents(1, 2, 2, 4))


@given(p1=finite_pos, p2=finite_pos)
def test_alpha_one_when_p_equals_q(p1, p2):
    lo, hi = sorted((p1, p2))
    e = Exponents(lo, lo, hi, hi)
    assert check_admissible(e)
    assert compute_alpha(e).alpha == 1.0


def test_harmonic_examples():
    assert harmonic_combine([2, 2]).combined == pytest.approx(1.0, abs=1e-15)
    assert harmonic_combine([5.0]).combined == pytest.approx(5.0, abs=1e-15)
    assert harmonic_combine([1, 2, 3]).combined == pytest.approx(6.0 / 11.0, rel=1e-15)
    with pytest.raises(EmptyParts):
        harmonic_combine([])


@given(parts=st.lists(finite_pos, min_size=1, max_size=5))
def test_harmonic_below_min(parts):
    assert harmonic_combine(parts).combined <= min(parts) * (1 + 1e-12)


def test_lemma_yy_examples():
    assert lemma_yy_gap([2, 2], [3, 3]) == pytest.approx(0.0, abs=1e-12)
    assert lemma_yy_gap([2, 2], [1, 2]) == pytest.approx(0.5, rel=1e-12)
    assert lemma_yy_gap([3.7], [1.9]) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(LengthMismatch):
        lemma_yy_gap([2, 2], [1.0])


@given(parts=st.lists(st.floats(min_value=1.0, max_value=8.0), min_size=1, max_size=3),
       data=st.data())
def test_lemma_yy_nonnegative(parts, data):
    values = data.draw(st.lists(st.floats(min_value=0.0, max_value=10.0),
                                min_size=len(parts), max_size=len(parts)))
    rhs = sum(v ** pj / pj for pj, v in zip(parts, values))
    assert lemma_yy_gap(parts, values) >= -1e-12 * max(1.0, rhs)


def test_lemma_yy_equality_iff_powers_agree():
    # q_j^{p_j} all equal -> equality
    parts = [2.0, 4.0, 4.0]
    values = [2.0, 2.0 ** 0.5, 2.0 ** 0.5]  # each power equals 4
    assert abs(lemma_yy_gap(parts, values)) <= 1e-12 * 4.0
    # disagreeing powers -> strictly positive gap
    assert lemma_yy_gap(parts, [2.0, 1.0, 1.0]) > 1e-6


def test_conjugate_examples():
    assert conjugate_exponent(2.0) == pytest.approx(2.0)
    assert conjugate_exponent(4.0) == pytest.approx(4.0 / 3.0)
    assert conjugate_exponent(1.0001) == pytest.approx(10001.0, rel=1e-8)
    with pytest.raises(OutOfRange):
        conjugate_exponent(1.0)

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from suq11.qcore import HalfInt, QContext, qbinom, qnum
from suq11.reps import (
    FiniteRepLabel,
    PosSeriesLabel,
    casimir_eigenvalue,
    coupled_generator_term,
    jpm_action,
    k0_action,
    kpm_action,
    kpm_power_coeff,
)

H = HalfInt.from_twice


@st.composite
def pos_labels(draw):
    tk = draw(st.integers(0, 12))
    return PosSeriesLabel(H(tk), H(tk + 2 + 2 * draw(st.integers(0, 8))))


@st.composite
def finite_labels(draw):
    tj = draw(st.integers(0, 10))
    return FiniteRepLabel(H(tj), H(tj - 2 * draw(st.integers(0, tj))))


def test_label_validation():
    with pytest.raises(ValueError):
        PosSeriesLabel(1, 1)
    with pytest.raises(ValueError):
        PosSeriesLabel(Fraction(1, 2), 2)
    with pytest.raises(ValueError):
        FiniteRepLabel(1, 2)
    with pytest.raises(ValueError):
        FiniteRepLabel(1, Fraction(1, 2))
    assert PosSeriesLabel.maybe(0, 0) is None
    assert k0_action(PosSeriesLabel(2, 5)) == 5


def test_lowering_annihilates_minimal_weight(ctx):
    assert kpm_action(-1, PosSeriesLabel(3, 4), ctx).annihilated
    assert jpm_action(+1, FiniteRepLabel(2, 2), 1, ctx).annihilated
    assert jpm_action(-1, FiniteRepLabel(2, -2), 1, ctx).annihilated


@given(pos_labels())
def test_commutator_on_basis(s):
    # <s| [K+, K-] |s> = -[2 mu]
    c = QContext(Fraction(1, 2), 40)
    up = kpm_action(+1, s, c).coefficient
    down = kpm_action(-1, s, c)
    down_then_up = down.coefficient ** 2 if not down.annihilated else 0
    lhs = down_then_up - up ** 2
    assert abs(lhs + qnum(2 * s.mu, c)) <= c.tol(5) * (1 + abs(lhs))


@given(pos_labels())
def test_casimir(s):
    # [K0][K0-1] - K+K- acts as [kappa][kappa+1] on the whole series
    c = QContext(Fraction(7, 10), 40)
    down = kpm_action(-1, s, c)
    kk = down.coefficient ** 2 if not down.annihilated else 0
    value = qnum(s.mu, c) * qnum(s.mu - 1, c) - kk
    assert abs(value - casimir_eigenvalue(s.kappa, c)) <= c.tol(5) * (1 + abs(value))


@given(pos_labels(), st.integers(0, 5))
def test_power_is_product_of_steps(s, r):
    c = QContext(Fraction(1, 2), 40)
    for sign in (+1, -1):
        prod, cur = c.mp.one, s
        for _ in range(r):
            step = kpm_action(sign, cur, c)
            if step.annihilated:
                prod, cur = 0, None
                break
            prod, cur = prod * step.coefficient, step.label
        res = kpm_power_coeff(sign, r, s, c)
        if cur is None:
            assert res.annihilated
        else:
            assert res.label == cur
            assert abs(res.coefficient - prod) <= c.tol(5) * abs(prod)


@given(finite_labels())
def test_su2_commutator(s):
    # [J+, J-] = [2 J0]
    c = QContext(Fraction(1, 2), 40)
    up, dn = jpm_action(+1, s, 1, c), jpm_action(-1, s, 1, c)
    lhs = (dn.coefficient ** 2 if not dn.annihilated else 0) - (up.coefficient ** 2 if not up.annihilated else 0)
    assert abs(lhs - qnum(2 * s.m, c)) <= c.tol(5) * (1 + abs(lhs))


def test_generator_term(ctx):
    t = coupled_generator_term("pos_pos", +1, 2, 5, ctx)
    assert (t.first_power, t.second_power, t.sign) == (2, 3, 1)
    assert t.prefactor == qbinom(5, 2, ctx)
    m = coupled_generator_term("mixed", -1, 1, 4, ctx)
    assert m.sign == -1
    with pytest.raises(ValueError):
        coupled_generator_term("pos_pos", 1, 6, 5, ctx)

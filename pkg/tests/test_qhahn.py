import json
import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from suq11 import qhahn as qh
from suq11.cgc import CGMethod, CGMixedLabel, CGPosLabel, cg_mixed, cg_pos
from suq11.qcore import QContext
from suq11.verify import qhahn_specs, random_mixed_label, random_pos_label

GOLDEN = json.loads((Path(__file__).parent / "golden.json").read_text())
SPECS = list(qhahn_specs(max_N=7, max_n=4))


def _eval(spec, s, c, monic=False):
    f = qh.hahn_eval if isinstance(spec, qh.HahnSpec) else qh.dual_hahn_eval
    return f(spec, s, c, monic=monic)


def _kind(spec):
    return "hahn" if isinstance(spec, qh.HahnSpec) else "dual"


class TestSpecs:
    def test_validation(self):
        with pytest.raises(ValueError):
            qh.HahnSpec(5, 4, 0, 0)
        with pytest.raises(ValueError):
            qh.HahnSpec(0, 0, 0, 0)
        with pytest.raises(ValueError):
            qh.DualHahnSpec(0, 0, Fraction(5, 2), 0)

    def test_orthogonality_flags(self):
        assert qh.HahnSpec(1, 4, 1, 1).orthogonal
        assert not qh.HahnSpec(1, 4, 3, -2).orthogonal
        assert qh.DualHahnSpec(1, 1, 5, -1).orthogonal
        assert not qh.DualHahnSpec(1, 0, 5, -3).orthogonal

    def test_support(self):
        assert list(qh.HahnSpec(0, 3, 0, 0).support) == [0, 1, 2]
        assert qh.DualHahnSpec(0, Fraction(1, 2), Fraction(7, 2), 0).support == [Fraction(1, 2), Fraction(3, 2),
                                                                                  Fraction(5, 2)]


@pytest.mark.parametrize("spec", [s for s in SPECS if s.n == 0], ids=str)
def test_degree_zero_is_one(spec, ctx):
    for s in spec.support:
        assert abs(_eval(spec, s, ctx) - 1) < ctx.tol(5)
        assert qh.residual("diffeq", spec, s, ctx) < ctx.tol(15)


@pytest.mark.parametrize("spec", [s for s in SPECS if s.n >= 1], ids=str)
def test_leading_coefficient(spec, ctx):
    # n-th divided difference in x(s) over n+1 lattice points
    kind = _kind(spec)
    pts = [spec.support[0] + i for i in range(spec.n + 1)]
    xs = [qh.lattice(kind, s, ctx) for s in pts]
    table = [_eval(spec, s, ctx, monic=True) for s in pts]
    for level in range(1, spec.n + 1):
        table = [(table[i + 1] - table[i]) / (xs[i + level] - xs[i]) for i in range(len(table) - 1)]
    assert abs(table[0] - 1) < ctx.tol(15)
    assert abs(_eval(spec, pts[0], ctx) - qh.leading_coefficient(spec, ctx) * _eval(spec, pts[0], ctx, monic=True)) \
        < ctx.tol(10) * (1 + abs(_eval(spec, pts[0], ctx)))


@pytest.mark.parametrize("spec", [s for s in SPECS if s.n == 0 and s.N >= 5], ids=str)
def test_ttrr_chain_reproduces_direct_values(spec, ctx):
    kind = _kind(spec)
    for s in spec.support:
        prev, cur = ctx.mp.zero, _eval(spec, s, ctx)
        for n in range(spec.N - 1):
            sp = spec.with_n(n)
            T = qh.table1_data(sp, s, ctx)
            nxt = ((qh.lattice(kind, s, ctx) - T["beta_n"]) * cur - T["gamma_n"] * prev) / T["alpha_n"]
            direct = _eval(spec.with_n(n + 1), s, ctx)
            assert abs(nxt - direct) <= ctx.tol(12) * (1 + abs(direct)), (n, s)
            prev, cur = cur, direct


@pytest.mark.parametrize("which", qh.RESIDUALS)
def test_identities_hold(which, ctx):
    worst = 0
    for spec in SPECS:
        if which in ("lowering", "raising") and spec.n > spec.N - 2:
            continue
        for s in spec.support:
            worst = max(worst, qh.residual(which, spec, s, ctx))
    assert worst < ctx.tol(15)


def test_ladder_needs_room(ctx):
    with pytest.raises(ValueError):
        qh.residual("raising", qh.HahnSpec(3, 4, 1, 1), 0, ctx)
    with pytest.raises(ValueError):
        qh.residual("curl", qh.HahnSpec(1, 4, 1, 1), 0, ctx)


def test_literal_hahn_table_fails(ctx):
    # the published q-Hahn entries do not satisfy the recurrence; kept as a finding
    spec = qh.HahnSpec(2, 6, 1, 2)
    assert qh.residual("ttrr", spec, 2, ctx, printed=True) > ctx.mpf(1) / 100
    assert qh.residual("ttrr", spec, 2, ctx) < ctx.tol(15)
    dual = qh.DualHahnSpec(2, 1, 7, 0)
    assert qh.residual("diffeq", dual, 3, ctx, printed=True) < ctx.tol(15)


@pytest.mark.parametrize("spec", [qh.HahnSpec(0, 7, 0, 0), qh.HahnSpec(0, 12, 3, 2), qh.HahnSpec(0, 9, 0, 5),
                                  qh.DualHahnSpec(0, 0, 12, 0), qh.DualHahnSpec(0, 1, 13, -1),
                                  qh.DualHahnSpec(0, 2, 14, 2)], ids=str)
def test_orthogonality(spec, ctx):
    d2 = {n: qh.weight_and_norm(spec.with_n(n), spec.support[0], ctx)["d2"] for n in range(7)}
    for n in range(7):
        for m in range(n, 7):
            val = qh.orthogonality_sum(spec.with_n(n), m, ctx)
            target = d2[n] if n == m else 0
            assert abs(val - target) <= ctx.tol(20) * d2[n], (n, m)


def test_weight_needs_integer_arguments(ctx):
    with pytest.raises(ValueError):
        qh.weight_and_norm(qh.HahnSpec(1, 4, Fraction(1, 2), 0), 1, ctx)


class TestConnections:
    def test_sign_is_frozen(self):
        assert qh.POS_DUAL_SIGN == GOLDEN["pos_dual_sign"]

    def test_parameters(self):
        L = CGPosLabel(Fraction(1, 2), Fraction(5, 2), 1, 3, Fraction(7, 2), Fraction(11, 2))
        _, spec, s = qh.connection_parameters("pos_hahn", L)
        assert (spec.n, spec.N, spec.alpha, spec.beta, s) == (1, 3, 3, 2, 1)
        _, spec, s = qh.connection_parameters("pos_dual", L)
        assert (spec.n, spec.a, spec.b, spec.c, s) == (1, Fraction(5, 2), Fraction(11, 2), Fraction(1, 2),
                                                       Fraction(7, 2))
        M = CGMixedLabel(2, 4, 1, 0, 2, 4)
        _, spec, s = qh.connection_parameters("mixed_hahn", M)
        assert (spec.n, spec.N, spec.alpha, spec.beta, s) == (1, 3, 5, -3, 1)
        assert not spec.orthogonal

    def test_normalisation_label(self, ctx):
        L = CGPosLabel(1, 2, 2, 3, 4, 5)
        for which in ("pos_hahn", "pos_dual"):
            assert abs(qh.cg_from_polynomials(which, L, ctx) - 1) < ctx.tol(10)

    @pytest.mark.parametrize("which", qh.CONNECTIONS)
    @given(seed=st.integers(0, 2 ** 32 - 1))
    def test_matches_closed_form(self, which, seed):
        c = QContext(Fraction(1, 2), 50)
        rng = random.Random(seed)
        if which.startswith("pos"):
            L = random_pos_label(rng)
            ref = cg_pos(L, CGMethod.HYP_B, c)
        else:
            L = random_mixed_label(rng)
            ref = cg_mixed(L, CGMethod.SUM_REV, c)
        got = qh.cg_from_polynomials(which, L, c)
        assert abs(got - ref) <= c.tol(12) * max(1, abs(ref))

    def test_inadmissible_is_zero(self, ctx):
        assert qh.cg_from_polynomials("mixed_dual", CGMixedLabel(1, 2, 1, 0, 1, 3), ctx) == 0
        with pytest.raises(ValueError):
            qh.connection_parameters("nope", CGPosLabel(0, 1, 0, 1, 1, 2))


def test_raising_with_exact_cancellation(ctx):
    # every term vanishes at this point; rounding noise must not read as a failure
    assert qh.residual("raising", qh.HahnSpec(1, 7, 6, -2), 1, ctx) < ctx.tol(15)

from fractions import Fraction

import pytest

from suq11.cgc import CGMixedLabel, CGPosLabel
from suq11.oracle import (
    ProjectionSpec,
    TensorState,
    apply_coupled,
    cg_oracle,
    cg_oracle_kernel,
    commutator_residuals,
    coupled_vector,
    coupled_vector_kernel,
    coupled_vectors,
    kernel_dimension,
    lemma_residuals,
    project,
    project_minimal,
)
from suq11.qcore import HalfInt, QContext

H = HalfInt.from_twice


def _random_state(kind, first, second, pairs, ctx):
    return TensorState(kind, first, second, {p: ctx.mpf(Fraction(i + 2, i + 3)) for i, p in enumerate(pairs)})


@pytest.mark.parametrize("kind,first,second,pairs", [
    ("pos_pos", H(1), H(3), [(H(3), H(5)), (H(5), H(7)), (H(7), H(5))]),
    ("mixed", H(2), H(2), [(H(4), H(0)), (H(6), H(2)), (H(8), H(-2))]),
])
def test_algebra_relations(kind, first, second, pairs, ctx):
    st = _random_state(kind, first, second, pairs, ctx)
    for name, r in commutator_residuals(st, ctx).items():
        assert r < ctx.tol(10), name
    for r_pow in (1, 2, 3):
        for name, r in lemma_residuals(st, r_pow, ctx, nu=2, eta=Fraction(1, 2)).items():
            assert r < ctx.tol(10), (name, r_pow)


def test_invalid_pair_rejected(ctx):
    with pytest.raises(ValueError):
        TensorState("pos_pos", 0, 0, {(Fraction(0), Fraction(1)): 1})
    with pytest.raises(ValueError):
        TensorState("mixed", 0, 1, {(Fraction(1), Fraction(2)): 1})


def test_projector_gives_lowest_weight(ctx):
    seed = TensorState.basis("pos_pos", H(1), H(0), (H(3), H(4)), ctx)
    low = project_minimal(H(5), seed, ctx)
    assert apply_coupled(-1, low, ctx).max_abs() < ctx.tol(10)


def test_projector_is_idempotent(ctx):
    seed = TensorState.basis("pos_pos", 0, 0, (Fraction(1), Fraction(2)), ctx)
    once = project_minimal(Fraction(2), seed, ctx)
    twice = project_minimal(Fraction(2), once, ctx)
    assert (once - twice).max_abs() < ctx.tol(10)


def test_generalised_projector(ctx):
    # P_{mu, mu_bar} maps the seed to a multiple of the normalised coupled vector
    spec = ProjectionSpec(Fraction(1), Fraction(3), Fraction(2))
    seed = TensorState.basis("pos_pos", 0, 0, (Fraction(1), Fraction(1)), ctx)
    out = project(spec, seed, ctx)
    ref = coupled_vector("pos_pos", 0, 0, 1, 3, ctx)
    ratio = out.get((1, 2)) / ref[(Fraction(1), Fraction(2))]
    for pair, v in ref.items():
        assert abs(out.get(pair) - ratio * v) < ctx.tol(10)
    with pytest.raises(ValueError):
        ProjectionSpec(Fraction(1), Fraction(1), Fraction(2))


@pytest.mark.parametrize("kind,first,second,kappa,mu", [
    ("pos_pos", 0, 0, 1, 4),
    ("pos_pos", H(1), H(3), 3, 7),
    ("mixed", 1, 1, 1, 4),
    ("mixed", H(3), H(5), 1, 4),
])
def test_coupled_vectors_normalised_and_agree(kind, first, second, kappa, mu, ctx):
    a = coupled_vector(kind, first, second, kappa, mu, ctx)
    b = coupled_vector_kernel(kind, first, second, kappa, mu, ctx)
    assert a.keys() == b.keys()
    for p in a:
        assert abs(a[p] - b[p]) < ctx.tol(10)
    if kind == "pos_pos":
        assert abs(sum(v * v for v in a.values()) - 1) < ctx.tol(10)


def test_chain_matches_single_vectors(ctx):
    vecs = coupled_vectors("mixed", H(3), H(2), H(3), H(11), ctx, method="kernel")
    assert sorted(vecs) == [H(5), H(7), H(9), H(11)]
    for mu, v in vecs.items():
        assert v == coupled_vector_kernel("mixed", H(3), H(2), H(3), mu, ctx)
    with pytest.raises(ValueError):
        coupled_vectors("mixed", 1, 1, 1, 3, ctx, method="svd")


def test_kernel_dimensions(ctx):
    # two positive series: one new lowest-weight vector per weight above the threshold
    assert [kernel_dimension("pos_pos", 0, 0, w, ctx) for w in (2, 3, 4)] == [1, 1, 1]
    # finite factor j=1 with kappa=2: weights 2, 3, 4 carry kappa' = 1, 2, 3
    assert [kernel_dimension("mixed", 2, 1, w, ctx) for w in (2, 3, 4, 5)] == [1, 1, 1, 0]


def test_label_entry_points(ctx):
    L = CGPosLabel(0, 2, 0, 1, 1, 3)
    assert abs(cg_oracle(L, ctx) - cg_oracle_kernel(L, ctx)) < ctx.tol(10)
    M = CGMixedLabel(1, 2, 1, 0, 1, 2)
    assert abs(cg_oracle(M, ctx) - cg_oracle_kernel(M, ctx)) < ctx.tol(10)
    with pytest.raises(TypeError):
        cg_oracle((0, 1, 0, 1, 1, 2), ctx)

"""Brute-force Clebsch-Gordan coefficients from the coupled generators.

Two independent routes are provided:

* :func:`cg_oracle` applies the projection-operator series
  ``sum_r c_r K+^r K-^r`` literally to a seed product vector;
* :func:`cg_oracle_kernel` solves for the lowest-weight vector of the
  coupled lowering operator in a dense weight block and raises it.

Both work for the positive-positive product and for the mixed product of a
positive series with a finite su_q(2) representation, where the coupled
generators are ``K'_\\pm = K_\\pm q^{J_0} \\pm q^{-K_0} J_\\pm``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, Tuple

from .qcore import HalfInt, QContext, qfact, qfact_recip, qnum, qpow
from .reps import FiniteRepLabel, PosSeriesLabel, jpm_action, kpm_action

__all__ = [
    "TruncationError",
    "KernelError",
    "TensorState",
    "ProjectionSpec",
    "apply_coupled",
    "apply_weight_function",
    "project_minimal",
    "project",
    "projector_coeff",
    "coupled_vector",
    "coupled_vector_kernel",
    "coupled_vectors",
    "cg_oracle",
    "cg_oracle_kernel",
    "kernel_dimension",
    "commutator_residuals",
    "lemma_residuals",
]

KINDS = ("pos_pos", "mixed")
Pair = Tuple[Fraction, Fraction]


class TruncationError(RuntimeError):
    """A computation crossed the truncation bound ``mu_cut``."""


class KernelError(RuntimeError):
    """The coupled lowering operator has no one-dimensional kernel in the block."""


def _valid_pair(kind, first, second, pair) -> bool:
    a, b = pair
    if kind == "pos_pos":
        return PosSeriesLabel.maybe(first, a) is not None and PosSeriesLabel.maybe(second, b) is not None
    return PosSeriesLabel.maybe(first, a) is not None and FiniteRepLabel.maybe(second, b) is not None


@dataclass
class TensorState:
    """Sparse vector in ``D^{first} (x) D^{second}``.

    ``first``/``second`` are (kappa1, kappa2) for ``pos_pos`` and (kappa, j)
    for ``mixed``.  Keys are label pairs (mu1, mu2) or (mu, m).  ``mu_cut``
    bounds the total weight; ``None`` means no truncation.
    """

    kind: str
    first: HalfInt
    second: HalfInt
    amplitudes: Dict[Pair, object] = field(default_factory=dict)
    mu_cut: Fraction | None = None
    tainted: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        self.first = HalfInt(self.first)
        self.second = HalfInt(self.second)
        clean = {}
        for pair, v in self.amplitudes.items():
            pair = (Fraction(pair[0]), Fraction(pair[1]))
            if not _valid_pair(self.kind, self.first, self.second, pair):
                raise ValueError(f"pair {pair} is not a valid basis label")
            clean[pair] = v
        self.amplitudes = clean

    @classmethod
    def basis(cls, kind, first, second, pair, ctx: QContext, mu_cut=None) -> "TensorState":
        return cls(kind, first, second, {pair: ctx.mp.one}, mu_cut)

    def like(self, amplitudes, tainted=None) -> "TensorState":
        out = TensorState(self.kind, self.first, self.second, {}, self.mu_cut,
                          self.tainted if tainted is None else tainted)
        out.amplitudes = {k: v for k, v in amplitudes.items() if v != 0}
        return out

    def norm2(self):
        return sum((v * v for v in self.amplitudes.values()), 0)

    def weights(self) -> set:
        return {a + b for a, b in self.amplitudes}

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.amplitudes.values())

    def __add__(self, other: "TensorState") -> "TensorState":
        out = dict(self.amplitudes)
        for k, v in other.amplitudes.items():
            out[k] = out.get(k, 0) + v
        return self.like(out, self.tainted or other.tainted)

    def __sub__(self, other: "TensorState") -> "TensorState":
        return self + other.scale(-1)

    def scale(self, c) -> "TensorState":
        return self.like({k: v * c for k, v in self.amplitudes.items()})

    def get(self, pair, default=0):
        return self.amplitudes.get((Fraction(pair[0]), Fraction(pair[1])), default)

    def max_abs(self):
        return max((abs(v) for v in self.amplitudes.values()), default=0)


@dataclass(frozen=True)
class ProjectionSpec:
    """Target ``|kappa mu>`` and source weight ``mu_bar`` of the generalised projector."""

    kappa_target: HalfInt
    mu_target: HalfInt
    mu_bar: HalfInt

    def __post_init__(self):
        k = HalfInt(self.kappa_target)
        object.__setattr__(self, "kappa_target", k)
        object.__setattr__(self, "mu_target", HalfInt(self.mu_target))
        object.__setattr__(self, "mu_bar", HalfInt(self.mu_bar))
        for name in ("mu_target", "mu_bar"):
            d = getattr(self, name) - k
            if d.denominator != 1 or d < 1:
                raise ValueError(f"{name} must be kappa_target+1, kappa_target+2, ...")


@lru_cache(maxsize=None)
def _ladder_step(kind, sign, k1, k2, a, b, ctx: QContext):
    """Images ``((pair, coefficient), ...)`` of one basis vector under ``K_\\pm(12)``."""
    out = []
    lr = kpm_action(sign, PosSeriesLabel(k1, a), ctx)
    if not lr.annihilated:
        out.append(((a + sign, b), lr.coefficient * qpow(b, ctx)))
    if kind == "pos_pos":
        lr = kpm_action(sign, PosSeriesLabel(k2, b), ctx)
        c = lr.coefficient
    else:
        lr = jpm_action(sign, FiniteRepLabel(k2, b), 1, ctx)
        c = sign * lr.coefficient
    if not lr.annihilated:
        out.append(((a, b + sign), c * qpow(-a, ctx)))
    return tuple(out)


def apply_coupled(sign: int, state: TensorState, ctx: QContext) -> TensorState:
    """Apply the coupled ladder operator ``K_\\pm(12)`` (or ``K'_\\pm(12)``)."""
    sign = 1 if sign in (1, "+") else -1
    out: Dict[Pair, object] = {}
    tainted = state.tainted
    for (a, b), v in state.amplitudes.items():
        if v == 0:
            continue
        if state.mu_cut is not None and sign > 0 and a + b + 1 > state.mu_cut:
            tainted = True
            continue
        for key, c in _ladder_step(state.kind, sign, state.first, state.second, a, b, ctx):
            out[key] = out.get(key, 0) + v * c
    return state.like(out, tainted)


def apply_weight_function(f: Callable, state: TensorState) -> TensorState:
    """Multiply each component by ``f(total weight)`` (a function of ``K0(12)``)."""
    return state.like({p: v * f(p[0] + p[1]) for p, v in state.amplitudes.items()})


def _power(sign, r, state, ctx):
    for _ in range(r):
        if state.is_zero():
            break
        state = apply_coupled(sign, state, ctx)
    return state


def projector_coeff(kappa, r: int, ctx: QContext):
    """``c_r = (-1)^r [2 kappa - r]! / ([r]! [2 kappa]!)``."""
    kappa = Fraction(kappa)
    return (-1) ** r * qfact(2 * kappa - r, ctx) * qfact_recip(r, ctx) / qfact(2 * kappa, ctx)


def project_minimal(kappa, state: TensorState, ctx: QContext) -> TensorState:
    """``P^{kappa+}_{kappa+1,kappa+1}`` on a state of total weight ``kappa+1``."""
    kappa = Fraction(kappa)
    w = state.weights()
    if w and w != {kappa + 1}:
        raise ValueError(f"state must have total weight {kappa + 1}, found {sorted(w)}")
    # Horner: sum_r c_r K+^r K-^r s = c_0 s + K+(c_1 K- s + K+(c_2 K-^2 s + ...))
    lowered = [state]
    while not lowered[-1].is_zero():
        if 2 * kappa - (len(lowered) - 1) < 0:
            raise ValueError(
                f"projection series does not terminate for kappa={kappa}: the state has "
                "components below the representations of the decomposition"
            )
        lowered.append(apply_coupled(-1, lowered[-1], ctx))
    total = state.like({})
    for r in range(len(lowered) - 2, -1, -1):
        total = apply_coupled(+1, total, ctx) + lowered[r].scale(projector_coeff(kappa, r, ctx))
    return total


def _norm_factor(kappa, mu, ctx):
    return ctx.mp.sqrt(qfact(2 * kappa + 1, ctx) / (qfact(mu + kappa, ctx) * qfact(mu - kappa - 1, ctx)))


def project(spec: ProjectionSpec, state: TensorState, ctx: QContext) -> TensorState:
    """Generalised projector ``P^{kappa+}_{mu, mu_bar}`` on a state of weight ``mu_bar``."""
    k, mu, mub = spec.kappa_target, spec.mu_target, spec.mu_bar
    low = _power(-1, int(mub - k - 1), state, ctx)
    mid = project_minimal(k, low, ctx)
    up = _power(+1, int(mu - k - 1), mid, ctx)
    return up.scale(_norm_factor(k, mu, ctx) * _norm_factor(k, mub, ctx))


# --- coupling helpers -------------------------------------------------------

def _check_labels(kind, first, second, kappa, mu):
    first, second, kappa, mu = map(HalfInt, (first, second, kappa, mu))
    if kind == "pos_pos":
        if first < 0 or second < 0:
            raise ValueError("kappa1, kappa2 must be >= 0")
        d = kappa - first - second - 1
        if d.denominator != 1 or d < 0:
            raise ValueError(f"kappa={kappa} must be kappa1+kappa2+1+n, n >= 0")
    else:
        if first < 0 or second < 0:
            raise ValueError("kappa, j must be >= 0")
        d = first + second - kappa
        if d.denominator != 1 or d < 0 or kappa < first - second:
            raise ValueError(f"kappa'={kappa} must be in kappa-j .. kappa+j")
    d = mu - kappa
    if d.denominator != 1 or d < 1:
        raise ValueError(f"mu={mu} must be kappa+1, kappa+2, ...")
    return first, second, kappa, mu


def _seed(kind, first, second, kappa) -> Pair:
    if kind == "pos_pos":
        return (first + 1, kappa - first)
    return (first + 1, kappa - first)


def _guarded(ctx: QContext, size) -> QContext:
    # rounded up so that nearby label sets share cached ladder coefficients
    return ctx.guarded(-(-ctx.guard_for(size) // 8) * 8)


def _round(values: Dict[Pair, object], ctx: QContext) -> Dict[Pair, object]:
    return {p: ctx.mpf(v) for p, v in values.items()}


def _minimal_projection(kind, first, second, kappa, mu_cut, g: QContext):
    """Unnormalised lowest-weight vector from the projector, and its squared norm."""
    seed = _seed(kind, first, second, kappa)
    if not _valid_pair(kind, first, second, seed):
        raise ValueError(f"seed pair {seed} is not a valid basis vector")
    state = TensorState.basis(kind, first, second, seed, g, mu_cut=mu_cut)
    minimal = project_minimal(kappa, state, g)
    norm2 = minimal.get(seed)
    if norm2 <= 0:
        raise ValueError(f"non-positive projected norm {norm2} at seed {seed}")
    return minimal, norm2


@lru_cache(maxsize=4096)
def _chain(method, kind, first, second, kappa, mu_max, ctx: QContext):
    """Normalised coupled vectors for mu = kappa+1 .. mu_max, raised one step at a time."""
    first, second, kappa, mu_max = _check_labels(kind, first, second, kappa, mu_max)
    g = _guarded(ctx, mu_max + kappa + first + second + 2)
    if method == "projection":
        state, norm2 = _minimal_projection(kind, first, second, kappa, mu_max + 2 * int(kappa + 1) + 4, g)
    else:
        state, norm2 = _minimal_kernel(kind, first, second, kappa, g)
    inv = 1 / g.mp.sqrt(norm2)
    out = []
    for step in range(int(mu_max - kappa)):
        if step:
            state = apply_coupled(+1, state, g)
        if state.tainted:
            raise TruncationError("raising crossed mu_cut; increase the truncation bound")
        scale = _norm_factor(kappa, kappa + 1 + step, g) * inv
        out.append(_round({p: v * scale for p, v in state.amplitudes.items()}, ctx))
    return tuple(out)


def coupled_vectors(kind, first, second, kappa, mu_max, ctx: QContext, method: str = "projection"):
    """``{mu: coupled_vector(..., mu)}`` for every ``mu`` up to ``mu_max``, sharing one raising chain.

    ``method`` is 'projection' or 'kernel'.
    """
    if method not in ("projection", "kernel"):
        raise ValueError("method must be 'projection' or 'kernel'")
    first, second, kappa, mu_max = map(HalfInt, (first, second, kappa, mu_max))
    chain = _chain(method, kind, first, second, kappa, mu_max, ctx)
    return {HalfInt(kappa + 1 + i): dict(v) for i, v in enumerate(chain)}


def _coupled_vector(kind, first, second, kappa, mu, ctx: QContext):
    return _chain("projection", kind, first, second, kappa, mu, ctx)[-1]


def coupled_vector(kind, first, second, kappa, mu, ctx: QContext) -> Dict[Pair, object]:
    """All coefficients ``<pair | kappa mu>`` from the projection series.

    For ``pos_pos`` the labels are (kappa1, kappa2, kappa, mu); for ``mixed``
    they are (kappa, j, kappa', mu').
    """
    return dict(_coupled_vector(kind, *map(HalfInt, (first, second, kappa, mu)), ctx))


def _weight_block(kind, first, second, weight):
    """Basis pairs of fixed total weight, sorted."""
    pairs = []
    if kind == "pos_pos":
        a = first + 1
        while weight - a >= second + 1:
            pairs.append((Fraction(a), Fraction(weight - a)))
            a += 1
    else:
        m = -second
        while m <= second:
            if weight - m >= first + 1:
                pairs.append((Fraction(weight - m), Fraction(m)))
            m += 1
    return sorted(pairs)


def _dense(kind, first, second, sign, src, dst, ctx):
    index = {p: i for i, p in enumerate(dst)}
    M = ctx.mp.zeros(len(dst), len(src))
    for jcol, p in enumerate(src):
        img = apply_coupled(sign, TensorState.basis(kind, first, second, p, ctx), ctx)
        for pair, v in img.amplitudes.items():
            M[index[pair], jcol] = v
    return M


def _kernel(kind, first, second, weight, ctx, full_rank_fast=False):
    src = _weight_block(kind, first, second, weight)
    dst = _weight_block(kind, first, second, weight - 1)
    if not src:
        return src, []
    if not dst:
        return src, [[ctx.mp.one if i == k else ctx.mp.zero for i in range(len(src))] for k in range(len(src))]
    M = _dense(kind, first, second, -1, src, dst, ctx)
    if full_rank_fast and len(dst) == len(src) - 1:
        # Householder QR of M^T: the last column of Q spans the kernel when M has full row rank
        Q, R = ctx.mp.qr(M.T, mode="full")
        diag = [abs(R[i, i]) for i in range(len(dst))]
        if min(diag) > max(diag) * ctx.tol(10) * 10 ** len(src):
            return src, [[Q[i, len(dst)] for i in range(len(src))]]
    U, S, V = ctx.mp.svd_r(M, full_matrices=True, compute_uv=True)
    smax = max(abs(s) for s in S) if len(S) else 0
    tol = smax * ctx.tol(10) * 10 ** len(src)
    rank = sum(1 for s in S if abs(s) > tol)
    null = [[V[i, c] for c in range(len(src))] for i in range(rank, len(src))]
    return src, null


def kernel_dimension(kind, first, second, weight, ctx: QContext) -> int:
    """Dimension of ``ker K_-(12)`` in the block of the given total weight."""
    first, second = HalfInt(first), HalfInt(second)
    g = _guarded(ctx, Fraction(weight) + first + second + 2)
    return len(_kernel(kind, first, second, Fraction(weight), g)[1])


def _minimal_kernel(kind, first, second, kappa, g: QContext):
    """Unnormalised lowest-weight vector from the kernel of ``K_-(12)``, and its squared norm."""
    W = kappa + 1
    src, null = _kernel(kind, first, second, W, g, full_rank_fast=True)
    if len(null) != 1:
        raise KernelError(f"kernel of the coupled lowering operator at weight {W} has dimension {len(null)}")
    seed = _seed(kind, first, second, kappa)
    w = dict(zip(src, null[0]))
    # seed = alpha w + K+(12) u
    lower = _weight_block(kind, first, second, W - 1)
    A = g.mp.zeros(len(src), 1 + len(lower))
    for i, p in enumerate(src):
        A[i, 0] = w[p]
    if lower:
        Kp = _dense(kind, first, second, +1, lower, src, g)
        for i in range(len(src)):
            for jcol in range(len(lower)):
                A[i, 1 + jcol] = Kp[i, jcol]
    rhs = g.mp.matrix([1 if p == seed else 0 for p in src])
    if A.rows != A.cols:
        raise KernelError(f"weight block sizes {len(src)} and {len(lower)} do not match")
    alpha = g.mp.lu_solve(A, rhs)[0]
    norm2 = alpha * w[seed]
    if norm2 <= 0:
        raise KernelError(f"non-positive projected norm {norm2}")
    state = TensorState("mixed" if kind == "mixed" else "pos_pos", first, second, {}).like(
        {p: alpha * v for p, v in w.items()})
    return state, norm2


def _coupled_vector_kernel(kind, first, second, kappa, mu, ctx: QContext):
    return _chain("kernel", kind, first, second, kappa, mu, ctx)[-1]


def coupled_vector_kernel(kind, first, second, kappa, mu, ctx: QContext) -> Dict[Pair, object]:
    """Same as :func:`coupled_vector`, via the kernel of the coupled lowering operator."""
    return dict(_coupled_vector_kernel(kind, *map(HalfInt, (first, second, kappa, mu)), ctx))


def _split_label(label):
    # accepts CGPosLabel / CGMixedLabel or plain tuples
    if hasattr(label, "kappa1"):
        return "pos_pos", (label.kappa1, label.kappa2, label.kappa, label.mu), (label.mu1, label.mu2)
    if hasattr(label, "kappa_p"):
        return "mixed", (label.kappa, label.j, label.kappa_p, label.mu_p), (label.mu, label.m)
    raise TypeError("expected a CGPosLabel or CGMixedLabel")


def cg_oracle(label, ctx: QContext):
    """Coefficient from the projection series (see module docstring)."""
    kind, outer, pair = _split_label(label)
    return coupled_vector(kind, *outer, ctx).get(tuple(map(Fraction, pair)), ctx.mp.zero)


def cg_oracle_kernel(label, ctx: QContext):
    """Coefficient from the kernel of the coupled lowering operator."""
    kind, outer, pair = _split_label(label)
    return coupled_vector_kernel(kind, *outer, ctx).get(tuple(map(Fraction, pair)), ctx.mp.zero)


# --- algebraic checks -------------------------------------------------------

def _residual(a: TensorState, b: TensorState):
    diff = a - b
    scale = max(a.max_abs(), b.max_abs(), 1)
    return diff.max_abs() / scale


def commutator_residuals(state: TensorState, ctx: QContext) -> dict:
    """Residuals of ``[K0,K+-] = +-K+-`` and ``[K+,K-] = -[2K0]`` on a state."""
    K0 = lambda s: apply_weight_function(lambda w: ctx.mpf(w), s)
    up = lambda s: apply_coupled(+1, s, ctx)
    dn = lambda s: apply_coupled(-1, s, ctx)
    out = {}
    for name, A, sgn in (("K0,K+", up, 1), ("K0,K-", dn, -1)):
        out[name] = _residual(K0(A(state)) - A(K0(state)), A(state).scale(sgn))
    lhs = up(dn(state)) - dn(up(state))
    rhs = apply_weight_function(lambda w: -qnum(2 * w, ctx), state)
    out["K+,K-"] = _residual(lhs, rhs)
    return out


def lemma_residuals(state: TensorState, r: int, ctx: QContext, nu=1, eta=0) -> dict:
    """Residuals of the operator lemma for ``B = K0(12)`` and ``A = K_\\pm(12)``.

    Checks ``[nu B + eta] A^r = A^r [nu B + eta +- nu r]`` and
    ``[A_\\pm, A_\\mp^r] = \\mp A_\\mp^{r-1} [r][2B \\mp (r-1)]``.
    """
    nu, eta = Fraction(nu), Fraction(eta)
    out = {}
    for sgn, tag in ((1, "+"), (-1, "-")):
        lhs = apply_weight_function(lambda w: qnum(nu * w + eta, ctx), _power(sgn, r, state, ctx))
        rhs = _power(sgn, r, apply_weight_function(lambda w: qnum(nu * w + eta + sgn * nu * r, ctx), state), ctx)
        out[f"lem2{tag}"] = _residual(lhs, rhs)
        if r >= 1:
            Ar = _power(-sgn, r, state, ctx)
            lhs = apply_coupled(sgn, Ar, ctx) - _power(-sgn, r, apply_coupled(sgn, state, ctx), ctx)
            f = lambda w: -sgn * qnum(r, ctx) * qnum(2 * w - sgn * (r - 1), ctx)
            rhs = _power(-sgn, r - 1, apply_weight_function(f, state), ctx)
            out[f"lem5{tag}"] = _residual(lhs, rhs)
    return out

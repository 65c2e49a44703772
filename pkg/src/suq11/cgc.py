"""Closed-form Clebsch-Gordan coefficients of su_q(1,1).

Two products are covered:

* ``<kappa1 mu1, kappa2 mu2 | kappa mu>_q`` for two positive discrete series;
* ``<kappa mu, j m | kappa' mu'>_q`` for a positive series times a finite
  (2j+1)-dimensional representation ("mixed").

Each coefficient has five equivalent closed forms, selected with
:class:`CGMethod`.  Every evaluation runs with extra guard digits sized to
the cancellation in the alternating sums and is rounded back to the caller's
precision.  Queries outside the selection rules return exactly zero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List

from .qcore import (
    HalfInt,
    HypSeriesSpec,
    QContext,
    qfact,
    qfact_recip,
    qhyper,
    qhyper_regularized,
    qnum,
    qpow,
)

__all__ = [
    "CGDomainError",
    "CGPosLabel",
    "CGMixedLabel",
    "CGMethod",
    "cg_pos",
    "cg_mixed",
    "special_value_pos",
    "special_value_mixed",
    "symmetry_check_pos",
    "recurrence_terms",
    "recurrence_residual",
    "enumerate_couplings",
    "POS_SPECIAL",
    "MIXED_SPECIAL",
]


class CGDomainError(ValueError):
    """Malformed labels (a component label outside its representation)."""


class CGMethod(enum.Enum):
    SUM_FWD = "sum_fwd"
    SUM_REV = "sum_rev"
    HYP_A = "hyp_a"
    HYP_B = "hyp_b"
    HYP_C = "hyp_c"

    @classmethod
    def parse(cls, value) -> "CGMethod":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            return cls[str(value).upper()]


def _h(x, name) -> HalfInt:
    try:
        return x if isinstance(x, HalfInt) else HalfInt(x)
    except (TypeError, ValueError) as exc:
        raise CGDomainError(f"{name}: {exc}") from None


def _is_nonneg_int(x) -> bool:
    return Fraction(x).denominator == 1 and x >= 0


@dataclass(frozen=True)
class CGPosLabel:
    """Labels of ``<kappa1 mu1, kappa2 mu2 | kappa mu>_q``.

    Construction checks that each basis label exists (``mu_i - kappa_i`` a
    positive integer, ``kappa_i >= 0``).  The coupling rules are reported by
    :attr:`admissible`; inadmissible labels evaluate to zero.
    """

    kappa1: HalfInt
    mu1: HalfInt
    kappa2: HalfInt
    mu2: HalfInt
    kappa: HalfInt
    mu: HalfInt

    def __post_init__(self):
        for name in ("kappa1", "mu1", "kappa2", "mu2", "kappa", "mu"):
            object.__setattr__(self, name, _h(getattr(self, name), name))
        for k, m, tag in ((self.kappa1, self.mu1, "1"), (self.kappa2, self.mu2, "2")):
            if k < 0:
                raise CGDomainError(f"kappa{tag}={k} must be >= 0")
            if not (_is_nonneg_int(m - k - 1)):
                raise CGDomainError(f"mu{tag}={m} must be kappa{tag}+1, kappa{tag}+2, ... (kappa{tag}={k})")
        if self.kappa < 0:
            raise CGDomainError(f"kappa={self.kappa} must be >= 0")

    @property
    def n(self) -> Fraction:
        return self.kappa - self.kappa1 - self.kappa2 - 1

    @property
    def admissible(self) -> bool:
        return (
            self.mu == self.mu1 + self.mu2
            and _is_nonneg_int(self.n)
            and _is_nonneg_int(self.mu - self.kappa - 1)
        )

    def violation(self) -> str | None:
        if self.mu != self.mu1 + self.mu2:
            return "mu != mu1 + mu2"
        if not _is_nonneg_int(self.n):
            return "kappa is not kappa1+kappa2+1+n with n >= 0"
        if not _is_nonneg_int(self.mu - self.kappa - 1):
            return "mu is not kappa+1, kappa+2, ..."
        return None

    def swapped(self) -> "CGPosLabel":
        return CGPosLabel(self.kappa2, self.mu2, self.kappa1, self.mu1, self.kappa, self.mu)

    def as_tuple(self) -> tuple:
        return (self.kappa1, self.mu1, self.kappa2, self.mu2, self.kappa, self.mu)

    names = ("kappa1", "mu1", "kappa2", "mu2", "kappa", "mu")


@dataclass(frozen=True)
class CGMixedLabel:
    """Labels of ``<kappa mu, j m | kappa' mu'>_q``.

    Construction checks the two component labels; :attr:`admissible` checks
    weight additivity and ``max(kappa-j, j-kappa) <= kappa' <= kappa+j``.
    """

    kappa: HalfInt
    mu: HalfInt
    j: HalfInt
    m: HalfInt
    kappa_p: HalfInt
    mu_p: HalfInt

    def __post_init__(self):
        for name in ("kappa", "mu", "j", "m", "kappa_p", "mu_p"):
            object.__setattr__(self, name, _h(getattr(self, name), name))
        if self.kappa < 0:
            raise CGDomainError(f"kappa={self.kappa} must be >= 0")
        if not _is_nonneg_int(self.mu - self.kappa - 1):
            raise CGDomainError(f"mu={self.mu} must be kappa+1, kappa+2, ... (kappa={self.kappa})")
        if self.j < 0 or not _is_nonneg_int(self.j - self.m) or abs(self.m) > self.j:
            raise CGDomainError(f"m={self.m} must lie in -j..j in integer steps (j={self.j})")

    @property
    def admissible(self) -> bool:
        return self.violation() is None

    def violation(self) -> str | None:
        k, j, kp = self.kappa, self.j, self.kappa_p
        if self.mu_p != self.mu + self.m:
            return "mu' != mu + m"
        if not _is_nonneg_int(k + j - kp):
            return "kappa' is not kappa+j-n with integer n >= 0"
        if kp < max(k - j, j - k):
            return "kappa' < max(kappa-j, j-kappa)"
        if not _is_nonneg_int(self.mu_p - kp - 1):
            return "mu' is not kappa'+1, kappa'+2, ..."
        return None

    def as_tuple(self) -> tuple:
        return (self.kappa, self.mu, self.j, self.m, self.kappa_p, self.mu_p)

    names = ("kappa", "mu", "j", "m", "kappa_p", "mu_p")


# --- shorthand used by the formulas ---------------------------------------

class _Q:
    """Bundle of q-functions bound to one (guarded) context."""

    def __init__(self, ctx: QContext):
        self.ctx = ctx
        self.sqrt = ctx.mp.sqrt

    def f(self, x):
        return qfact(x, self.ctx)

    def rf(self, x):
        return qfact_recip(x, self.ctx)

    def n(self, x):
        return qnum(x, self.ctx)

    def p(self, e):
        return qpow(Fraction(e), self.ctx)

    def hyp(self, upper, lower, zexp):
        return qhyper(HypSeriesSpec(upper, lower, self.p(zexp)), self.ctx)

    def hyp_reg(self, upper, lower, zexp, index):
        return qhyper_regularized(HypSeriesSpec(upper, lower, self.p(zexp)), self.ctx, index)


def _sign(e) -> int:
    return -1 if int(e) % 2 else 1


def _sum(bound: int, term) -> object:
    """Sum ``term(r)`` for ``r = 0..bound``; the first omitted term must vanish."""
    total = 0
    for r in range(bound + 1):
        total += term(r)
    assert term(bound + 1) == 0, "summation bound disagrees with natural termination"
    return total


# --- positive x positive ---------------------------------------------------

def _pos_common(L: CGPosLabel, Q: _Q):
    k1, m1, k2, m2, k, mu = L.as_tuple()
    return k1, m1, k2, m2, k, mu, int(L.n)


def _pos_sum_fwd(L, Q):
    k1, m1, k2, m2, k, mu, n = _pos_common(L, Q)
    f, rf = Q.f, Q.rf
    pre = Q.sqrt(Q.n(2 * k + 1) * f(k - k1 + k2) * f(n) / (f(k + k1 - k2) * f(k + k1 + k2 + 1)))
    pre *= Q.p(-(k - k1 + k2) * n / 2)
    pre *= Q.sqrt(f(m1 + k1) * f(m2 + k2) * f(m2 - k2 - 1) / (f(mu + k) * f(mu - k - 1) * f(m1 - k1 - 1)))
    pre *= Q.p(m1 * (k + 1) - mu * (k1 + 1))

    # integer offsets keep the loop free of Fraction arithmetic
    a, b, c, d = int(2 * k), int(mu - k - 1), int(k - k1 + k2), int(m2 + k1 - k)
    z = Q.p(-(m1 + k1 + 1))

    def term(r):
        if a - r < 0:
            return 0
        return (_sign(r) * f(a - r) * f(b + r) * rf(r) * rf(c - r) * rf(n - r) * rf(d + r) * z ** r)

    return pre * _sum(n, term)


def _pos_sum_rev(L, Q):
    k1, m1, k2, m2, k, mu, n = _pos_common(L, Q)
    f, rf = Q.f, Q.rf
    pre = _sign(n) * Q.sqrt(Q.n(2 * k + 1) * f(k - k1 + k2) * f(n) / (f(k + k1 - k2) * f(k + k1 + k2 + 1)))
    pre *= Q.p(-(k + k1 + k2 + 2) * n / 2)
    pre *= Q.sqrt(f(m1 + k1) * f(m2 + k2) * f(m2 - k2 - 1) / (f(mu + k) * f(mu - k - 1) * f(m1 - k1 - 1)))
    pre *= Q.p(m1 * (k2 + 1) - m2 * (k1 + 1))

    a, b, c, d = int(k + k1 + k2 + 1), int(mu - k1 - k2 - 2), int(2 * k2 + 1), int(m2 - k2 - 1)
    z = Q.p(m1 + k1 + 1)

    def term(r):
        if b - r < 0:
            return 0
        return _sign(r) * f(a + r) * f(b - r) * rf(r) * rf(n - r) * rf(c + r) * rf(d - r) * z ** r

    return pre * _sum(min(n, int(m2 - k2 - 1)), term)


def _pos_hyp_a(L, Q):
    k1, m1, k2, m2, k, mu, n = _pos_common(L, Q)
    f = Q.f
    pre = Q.sqrt(f(2 * k + 1) * f(2 * k) / (f(k + k1 - k2) * f(k - k1 + k2) * f(n) * f(k + k1 + k2 + 1)))
    pre *= Q.p(-(k - k1 + k2) * n / 2)
    pre *= Q.sqrt(f(mu - k - 1) * f(m1 + k1) * f(m2 + k2) * f(m2 - k2 - 1) / (f(mu + k) * f(m1 - k1 - 1)))
    pre *= Q.p(m1 * (k + 1) - mu * (k1 + 1))
    # lower parameter m2+k1-k+1 may be a nonpositive integer: regularise
    return pre * Q.hyp_reg([-n, k1 - k2 - k, mu - k], [-2 * k, m2 + k1 - k + 1], -(m1 + k1 + 1), 1)


def _pos_hyp_b(L, Q):
    k1, m1, k2, m2, k, mu, n = _pos_common(L, Q)
    f = Q.f
    pre = _sign(n) / f(2 * k2 + 1)
    pre *= Q.sqrt(Q.n(2 * k + 1) * f(k - k1 + k2) * f(k + k1 + k2 + 1) / (f(k + k1 - k2) * f(n)))
    pre *= Q.p(-(k + k1 + k2 + 2) * n / 2) * f(mu - k1 - k2 - 2)
    pre *= Q.sqrt(f(m1 + k1) * f(m2 + k2) / (f(mu + k) * f(mu - k - 1) * f(m1 - k1 - 1) * f(m2 - k2 - 1)))
    pre *= Q.p(m1 * (k2 + 1) - m2 * (k1 + 1))
    return pre * Q.hyp([-n, k + k1 + k2 + 2, k2 + 1 - m2], [2 * k2 + 2, k1 + k2 + 2 - mu], m1 + k1 + 1)


def _pos_hyp_c(L, Q):
    k1, m1, k2, m2, k, mu, n = _pos_common(L, Q)
    f = Q.f
    pre = f(mu - k1 - k2 - 2) / f(2 * k1 + 1)
    pre *= Q.sqrt(Q.n(2 * k + 1) * f(k - k2 + k1) * f(k + k1 + k2 + 1) / (f(k + k2 - k1) * f(n)))
    pre *= Q.p((k + k1 + k2 + 2) * n / 2)
    pre *= Q.sqrt(f(m1 + k1) * f(m2 + k2) / (f(mu + k) * f(mu - k - 1) * f(m1 - k1 - 1) * f(m2 - k2 - 1)))
    pre *= Q.p(m1 * (k2 + 1) - m2 * (k1 + 1))
    return pre * Q.hyp([-n, k + k1 + k2 + 2, k1 + 1 - m1], [2 * k1 + 2, k1 + k2 + 2 - mu], -m2 - k2 - 1)


_POS = {
    CGMethod.SUM_FWD: _pos_sum_fwd,
    CGMethod.SUM_REV: _pos_sum_rev,
    CGMethod.HYP_A: _pos_hyp_a,
    CGMethod.HYP_B: _pos_hyp_b,
    CGMethod.HYP_C: _pos_hyp_c,
}


def _as_pos(label) -> CGPosLabel:
    return label if isinstance(label, CGPosLabel) else CGPosLabel(*label)


def _as_mixed(label) -> CGMixedLabel:
    return label if isinstance(label, CGMixedLabel) else CGMixedLabel(*label)


def _guard(ctx: QContext, size) -> _Q:
    return _Q(ctx.guarded(ctx.guard_for(size)))


def cg_pos(label, method=CGMethod.SUM_FWD, ctx: QContext | None = None):
    """``<kappa1 mu1, kappa2 mu2 | kappa mu>_q``.

    ``label`` is a :class:`CGPosLabel` or a 6-tuple in that field order.
    """
    ctx = ctx or QContext()
    L = _as_pos(label)
    method = CGMethod.parse(method)
    if not L.admissible:
        return ctx.mp.zero
    Q = _guard(ctx, L.mu + L.kappa + 1)
    return ctx.mpf(_POS[method](L, Q))


# --- mixed ----------------------------------------------------------------

def _mx_common(L: CGMixedLabel):
    return L.as_tuple()


def _mx_first_root(L, Q):
    k, mu, j, m, kp, mup = L.as_tuple()
    f = Q.f
    return Q.sqrt(Q.n(2 * kp + 1) * f(j - k + kp) / (f(k + j + kp + 1) * f(k - j + kp) * f(k + j - kp)))


def _mx_mu_root(L, Q):
    k, mu, j, m, kp, mup = L.as_tuple()
    f = Q.f
    return Q.sqrt(f(mu + k) * f(j + m) / (f(mup + kp) * f(mup - kp - 1) * f(mu - k - 1) * f(j - m)))


def _mx_sum_fwd(L, Q):
    k, mu, j, m, kp, mup = L.as_tuple()
    f, rf = Q.f, Q.rf
    pre = _mx_first_root(L, Q) * Q.p((k + j - kp + 1) * (j - k + kp) / 2)
    pre *= _mx_mu_root(L, Q) * Q.p(mu * (kp + 1) - mup * (k + 1))

    a, b, c, d, e = int(2 * kp), int(k + j - kp), int(mup - kp - 1), int(j - k + kp), int(m + k - kp)
    z = Q.p(-(mu + k + 1))

    def term(r):
        if a - r < 0:
            return 0
        return f(a - r) * f(b + r) * f(c + r) * rf(r) * rf(d - r) * rf(e + r) * z ** r

    return pre * _sum(d, term)


def _mx_sum_rev(L, Q):
    k, mu, j, m, kp, mup = L.as_tuple()
    f, rf = Q.f, Q.rf
    pre = _mx_first_root(L, Q) * Q.p(-(k - j + kp + 1) * (j - k + kp) / 2)
    pre *= _mx_mu_root(L, Q) * Q.p(mu * (k - j + 1) - mup * (k + 1))

    a, b, c, d, e = int(2 * j), int(k - j + kp), int(mup - k + j - 1), int(j - k + kp), int(j + m)
    z = Q.p(mu + k + 1)

    def term(r):
        if a - r < 0 or c - r < 0:
            return 0
        return f(a - r) * f(b + r) * f(c - r) * rf(r) * rf(d - r) * rf(e - r) * z ** r

    return pre * _sum(int(min(j - k + kp, j + m)), term)


def _mx_hyp_a(L, Q):
    k, mu, j, m, kp, mup = L.as_tuple()
    f = Q.f
    pre = Q.sqrt(f(2 * kp) * f(2 * kp + 1) * f(k + j - kp) / (f(k + j + kp + 1) * f(k - j + kp) * f(j - k + kp)))
    pre *= Q.p((k + j - kp + 1) * (j - k + kp) / 2)
    pre *= Q.sqrt(f(mup - kp - 1) * f(mu + k) * f(j + m) / (f(mup + kp) * f(mu - k - 1) * f(j - m)))
    pre *= Q.p(mu * (kp + 1) - mup * (k + 1))
    return pre * Q.hyp_reg([k - j - kp, mup - kp, k + j - kp + 1], [-2 * kp, m + k - kp + 1], -(mu + k + 1), 1)


def _mx_hyp_b(L, Q):
    k, mu, j, m, kp, mup = L.as_tuple()
    f = Q.f
    pre = f(2 * j) * Q.sqrt(Q.n(2 * kp + 1) * f(k - j + kp) / (f(k + j + kp + 1) * f(j - k + kp) * f(k + j - kp)))
    pre *= Q.p(-(k - j + kp + 1) * (j - k + kp) / 2) * f(mup - k + j - 1)
    pre *= Q.sqrt(f(mu + k) / (f(mup + kp) * f(mup - kp - 1) * f(mu - k - 1) * f(j + m) * f(j - m)))
    pre *= Q.p(-mu * j - m * (k + 1))
    return pre * Q.hyp([k - j - kp, -j - m, k - j + kp + 1], [-2 * j, k - j - mup + 1], mu + k + 1)


def _mx_hyp_c(L, Q):
    k, mu, j, m, kp, mup = L.as_tuple()
    f = Q.f
    pre = _sign(j - k + kp) * Q.sqrt(
        f(2 * kp) * f(2 * kp + 1) * f(k + j - kp) / (f(k + j + kp + 1) * f(k - j + kp) * f(j - k + kp)))
    pre *= Q.sqrt(f(mup - kp - 1) * f(mu + k) * f(mu - k - 1) / (f(mup + kp) * f(j + m) * f(j - m)))
    pre *= Q.p(-mu * j - m * (j + kp + 1)) * Q.p((k + j + kp + 1) * (j - k + kp) / 2)
    return pre * Q.hyp_reg([k - j - kp, mup - kp, -k - j - kp - 1], [-2 * kp, mu - j - kp], m - j, 1)


_MIXED = {
    CGMethod.SUM_FWD: _mx_sum_fwd,
    CGMethod.SUM_REV: _mx_sum_rev,
    CGMethod.HYP_A: _mx_hyp_a,
    CGMethod.HYP_B: _mx_hyp_b,
    CGMethod.HYP_C: _mx_hyp_c,
}


def cg_mixed(label, method=CGMethod.SUM_FWD, ctx: QContext | None = None):
    """``<kappa mu, j m | kappa' mu'>_q``; ``label`` is a :class:`CGMixedLabel` or 6-tuple."""
    ctx = ctx or QContext()
    L = _as_mixed(label)
    method = CGMethod.parse(method)
    if not L.admissible:
        return ctx.mp.zero
    Q = _guard(ctx, max(L.mu + L.kappa, L.mu_p + L.kappa_p) + L.j + 1)
    return ctx.mpf(_MIXED[method](L, Q))


# --- special values -------------------------------------------------------

POS_SPECIAL = ("mu2_min", "mu1_min", "mu_min", "kappa_min")
MIXED_SPECIAL = ("m_max", "m_min", "mu_min", "mu_p_min", "kp_max", "kp_min_kj", "kp_min_jk")


def special_value_pos(which: str, label, ctx: QContext | None = None):
    """Closed-form special values; ``label`` must sit at the extreme value named by ``which``.

    ``mu2_min``: mu2 = kappa2+1; ``mu1_min``: mu1 = kappa1+1; ``mu_min``:
    mu = kappa+1; ``kappa_min``: kappa = kappa1+kappa2+1.
    """
    ctx = ctx or QContext()
    L = _as_pos(label)
    if not L.admissible:
        return ctx.mp.zero
    k1, m1, k2, m2, k, mu = L.as_tuple()
    n = L.n
    Q = _guard(ctx, mu + k + 1)
    f, p, sq = Q.f, Q.p, Q.sqrt
    if which == "mu2_min":
        if m2 != k2 + 1:
            raise CGDomainError("mu2_min needs mu2 = kappa2+1")
        v = _sign(n) * sq(Q.n(2 * k + 1) * f(k - k1 + k2) * f(k + k1 + k2 + 1)
                          / (f(k + k1 - k2) * f(n) * f(2 * k2 + 1)))
        v *= p((k1 * (k1 + 1) + k2 * (k2 + 1) - k * (k + 1)) / 2)
        v *= sq(f(m1 + k1) * f(m1 - k1 - 1) / (f(mu + k) * f(mu - k - 1))) * p(m1 * (k2 + 1))
    elif which == "mu1_min":
        if m1 != k1 + 1:
            raise CGDomainError("mu1_min needs mu1 = kappa1+1")
        v = sq(Q.n(2 * k + 1) * f(k + k1 - k2) * f(k + k1 + k2 + 1)
               / (f(k - k1 + k2) * f(n) * f(2 * k1 + 1)))
        v *= p((k * (k + 1) - k1 * (k1 + 1) - k2 * (k2 + 1)) / 2)
        v *= sq(f(m2 + k2) * f(m2 - k2 - 1) / (f(mu + k) * f(mu - k - 1))) * p(-m2 * (k1 + 1))
    elif which == "mu_min":
        if mu != k + 1:
            raise CGDomainError("mu_min needs mu = kappa+1")
        v = _sign(m1 - k1 - 1) * sq(
            f(k - k1 + k2) * f(k + k1 - k2) * f(k + k1 + k2 + 1) * f(n)
            / (f(m2 + k2) * f(m2 - k2 - 1) * f(m1 - k1 - 1) * f(m1 + k1) * f(2 * k)))
        v *= p((k * (k + 1) - k1 * (k1 + 1) - k2 * (k2 + 1)) / 2 - (k - k1) * (k1 + 1) - k * (m1 - k1 - 1))
    elif which == "kappa_min":
        if n != 0:
            raise CGDomainError("kappa_min needs kappa = kappa1+kappa2+1")
        v = sq(f(2 * k1 + 2 * k2 + 3) / (f(2 * k1 + 1) * f(2 * k2 + 1)))
        v *= sq(f(mu - k1 - k2 - 2) * f(m1 + k1) * f(m2 + k2)
                / (f(mu + k1 + k2 + 1) * f(m1 - k1 - 1) * f(m2 - k2 - 1)))
        v *= p(m1 * (k2 + 1) - m2 * (k1 + 1))
    else:
        raise ValueError(f"unknown special value {which!r}; choose from {POS_SPECIAL}")
    return ctx.mpf(v)


def special_value_mixed(which: str, label, ctx: QContext | None = None):
    """Closed-form special values of the mixed coefficients.

    ``m_max``: m=j; ``m_min``: m=-j; ``mu_min``: mu=kappa+1; ``mu_p_min``:
    mu'=kappa'+1; ``kp_max``: kappa'=kappa+j; ``kp_min_kj``: kappa'=kappa-j
    (kappa >= j); ``kp_min_jk``: kappa'=j-kappa, returned as the explicit sum.
    """
    ctx = ctx or QContext()
    L = _as_mixed(label)
    if not L.admissible:
        return ctx.mp.zero
    k, mu, j, m, kp, mup = L.as_tuple()
    Q = _guard(ctx, max(mu + k, mup + kp) + j + 1)
    f, rf, p, sq = Q.f, Q.rf, Q.p, Q.sqrt

    def need(cond, text):
        if not cond:
            raise CGDomainError(f"{which} needs {text}")

    if which == "m_max":
        need(m == j, "m = j")
        v = sq(Q.n(2 * kp + 1) * f(k - j + kp) * f(2 * j) * f(mup - kp - 1) * f(mup + kp)
               / (f(k + j + kp + 1) * f(k + j - kp) * f(j - k + kp) * f(mu + k) * f(mu - k - 1)))
        v *= p(mu * (kp + 1) - mup * (j + kp + 1) + (k + j + kp + 1) * (j - k + kp) / 2)
    elif which == "m_min":
        need(m == -j, "m = -j")
        v = sq(Q.n(2 * kp + 1) * f(2 * j) * f(k - j + kp) * f(mu + k) * f(mu - k - 1)
               / (f(k + j + kp + 1) * f(k + j - kp) * f(j - k + kp) * f(mup + kp) * f(mup - kp - 1)))
        v *= p(j * (kp + 1 - mup) - (k + j + kp + 1) * (j - k + kp) / 2)
    elif which == "mu_min":
        need(mu == k + 1, "mu = kappa+1")
        v = sq(Q.n(2 * kp + 1) * f(k + j + kp + 1) * f(k + j - kp) * f(k - j + kp) * f(j + m)
               / (f(2 * k + 1) * f(j - k + kp) * f(mup - kp - 1) * f(mup + kp) * f(j - m)))
        v *= p(-(k + 1) * (mup - kp - 1) - (k + j - kp + 1) * (j - k + kp) / 2)
    elif which == "mu_p_min":
        need(mup == kp + 1, "mu' = kappa'+1")
        v = sq(f(k + j + kp + 1) * f(k - j + kp) * f(j - k + kp) * f(j - m)
               / (f(2 * kp) * f(k + j - kp) * f(mu + k) * f(mu - k - 1) * f(j + m)))
        v *= p((k - j + kp + 1) * (j + m) - mu * j - m * (k + 1) - (k - j + kp + 1) * (j - k + kp) / 2)
    elif which == "kp_max":
        need(kp == k + j, "kappa' = kappa+j")
        v = sq(f(2 * k) * f(2 * j) * f(mup + k + j) * f(mu - k - 1)
               / (f(2 * k + 2 * j) * f(mup - k - j - 1) * f(mu + k) * f(j + m) * f(j - m)))
        v *= p(-mu * j + m * k)
    elif which == "kp_min_kj":
        need(kp == k - j and k >= j, "kappa' = kappa-j with kappa >= j")
        v = sq(f(2 * k - 2 * j + 1) * f(2 * j) * f(mup - k + j - 1) * f(mu + k)
               / (f(2 * k + 1) * f(mup + k - j) * f(mu - k - 1) * f(j + m) * f(j - m)))
        v *= p(-mu * j - m * (k + 1))
    elif which == "kp_min_jk":
        need(kp == j - k and j >= k, "kappa' = j-kappa with j >= kappa")
        v = sq(f(2 * j - 2 * k + 1) * f(mu + k) * f(j + m)
               / (f(2 * j + 1) * f(2 * k) * f(mup + j - k) * f(mup - j + k - 1) * f(mu - k - 1) * f(j - m)))
        v *= p((2 * k + 1) * (j - k) + mu * (j - k + 1) - mup * (k + 1))
        shift = int(j - 2 * k - m)
        total = 0
        if shift > 0:
            # r = shift + s, s = 0..j+m
            for s in range(int(j + m) + 1):
                total += f(j - m + s) * f(mu - k - 1 + s) * rf(shift + s) * rf(s) * p(-(mu + k + 1) * s)
            total *= p(-(mu + k + 1) * shift)
        else:
            for r in range(int(2 * j - 2 * k) + 1):
                total += f(2 * k + r) * f(mup - j + k - 1 + r) * rf(r) * rf(m - j + 2 * k + r) * p(-(mu + k + 1) * r)
        v *= total
    else:
        raise ValueError(f"unknown special value {which!r}; choose from {MIXED_SPECIAL}")
    return ctx.mpf(v)


# --- symmetry ---------------------------------------------------------------

def symmetry_check_pos(label, ctx: QContext | None = None, method=CGMethod.SUM_FWD):
    """``(lhs, rhs)`` with rhs = (-1)^n <kappa2 mu2, kappa1 mu1 | kappa mu> at 1/q."""
    ctx = ctx or QContext()
    L = _as_pos(label)
    lhs = cg_pos(L, method, ctx)
    if not L.admissible:
        return lhs, ctx.mp.zero
    rhs = _sign(L.n) * cg_pos(L.swapped(), method, ctx.inverse())
    return lhs, ctx.mpf(rhs)


# --- recurrences ------------------------------------------------------------

def _cg_or_zero(labels, ctx, method):
    try:
        return cg_mixed(CGMixedLabel(*labels), method, ctx)
    except CGDomainError:
        return ctx.mp.zero


def recurrence_terms(which: str, label, ctx: QContext | None = None, method=CGMethod.SUM_FWD):
    """``(lhs, [rhs terms])`` of one linear recurrence between mixed coefficients.

    The coefficients c1, c2, c3 and the shifted labels are taken as printed;
    shifted labels outside the representation contribute zero.
    """
    ctx = ctx or QContext()
    L = _as_mixed(label)
    k, mu, j, m, kp, mup = L.as_tuple()
    g = ctx.guarded(ctx.guard_for(max(mu + k, mup + kp) + j + 3))
    n = lambda x: qnum(x, g)
    p = lambda e: qpow(Fraction(e), g)
    sq = g.mp.sqrt
    cg = lambda *lab: _cg_or_zero(lab, g, method)
    here = cg(k, mu, j, m, kp, mup)
    if which == "c1":
        c1 = (n(kp - k + j) * n(kp + k - j + 1) * p(-(3 * j + kp + 2 * m + 3))
              - n(j - m) * n(k + m + kp + 1) * p(-k + 1)
              + n(j + m) * n(k - kp - m + 1) * p(k + 1))
        lhs = c1 * sq(n(mup - kp) * n(mup + kp)) * here
        rhs = [
            n(k + m + kp + 1) * sq(n(mup + kp + 1) * n(j + m + 1) * n(mup + kp)) * p(2 * (j - k))
            * cg(k, mu, j, m + 1, kp, mup + 1),
            n(k - kp - m + 1) * sq(n(mup - kp - 1) * n(j - m + 1) * n(mup - kp)) * p(2 * (k + 1))
            * cg(k, mu, j, m - 1, kp, mup - 1),
        ]
    elif which == "c2":
        h = (j + m) / 2
        c2 = (n(kp - k + j) * n(kp + k + j + 1) * n(kp + mup) * p(kp - mup - 2 * j + 1)
              + n(2 * kp) * (n(k + j + h + 1) * n(k + mu) * p(-2 * j - 1 - mup + (j + mu) / 2)
                             + n(mu - h) * n(k + j + 1 - h) * p(-(k + mu))
                             - n(kp + h) * n(kp + h + 1) * p(2 * (j + m))) * p(j + m + 1))
        lhs = c2 * sq(n(2 * kp - 1) * n(mup - kp - 1)) * here
        rhs = [
            sq(n(k - j + kp) * n(k + j - kp + 1) * n(mup - kp) * n(mup - kp - 1) * n(kp - k + j)
               * n(kp + k + j + 1) * n(kp + mup)) * p(mup - 2 * j - 1) * cg(k, mu, j, m, kp - 1, mup),
            -n(2 * kp) * sq(n(j + m + 1) * n(j - m) * n(kp + mup + 1) * n(2 * kp - 1) * n(mup - kp - 1))
            * p(-2 * j - 2 * m - mu) * cg(k, mu, j, m + 1, kp, mup + 1),
        ]
    elif which == "c3":
        c3 = (n(j + m) * p(mup + j - m)
              + n(kp + k - j + 1) * n(k + j - kp) * n(mup - kp - 1) * p(-kp)
              - n(kp - k + j) * n(kp + k + j + 1) * n(kp + mup) * p(kp - 2))
        lhs = c3 * sq(n(2 * kp + 3) * n(2 * kp - 1)) * here
        rhs = [
            sq(n(2 * k + 1) * n(2 * kp - 1) * n(k + j + kp + 2) * n(j - k + kp + 1) * n(mup + kp + 1)
               * n(kp + k - j + 1) * n(k + j - kp) * n(mup - kp - 1)) * cg(k, mu, j, m, kp + 1, mup),
            -sq(n(2 * kp + 1) * n(2 * kp + 3) * n(kp - k + j) * n(kp + k + j + 1) * n(mup + kp)
                * n(k - j + kp) * n(k + j - kp + 1) * n(mup - kp)) * cg(k, mu, j, m, kp - 1, mu),
        ]
    else:
        raise ValueError("which must be 'c1', 'c2' or 'c3'")
    return lhs, rhs


def recurrence_residual(which: str, label, ctx: QContext | None = None, method=CGMethod.SUM_FWD):
    """Scale-relative ``|lhs - sum(rhs)|`` (divided by the largest term)."""
    ctx = ctx or QContext()
    lhs, rhs = recurrence_terms(which, label, ctx, method)
    scale = max([abs(lhs)] + [abs(t) for t in rhs])
    diff = abs(lhs - sum(rhs))
    if scale == 0:
        return ctx.mp.zero
    return ctx.mpf(diff / scale)


# --- enumeration ------------------------------------------------------------

def _halves(lo, hi) -> Iterator[HalfInt]:
    x = HalfInt(lo)
    while x <= hi:
        yield x
        x = HalfInt(x + 1)


def enumerate_couplings(kind: str, ctx: QContext | None = None, **fixed) -> List:
    """All admissible labels for fixed outer labels.

    ``kind='pos'``: keywords kappa1, kappa2, mu and optionally kappa; mu1 runs
    over kappa1+1 .. mu-kappa2-1 and kappa over kappa1+kappa2+1 .. mu-1.

    ``kind='mixed'``: keywords kappa, mu, j, m and optionally kappa_p;
    kappa' runs over |kappa-j| .. kappa+j subject to mu' = mu+m >= kappa'+1.
    """
    out = []
    if kind in ("pos", "pos_pos"):
        k1, k2, mu = (HalfInt(fixed[x]) for x in ("kappa1", "kappa2", "mu"))
        kappas = [HalfInt(fixed["kappa"])] if fixed.get("kappa") is not None else list(
            _halves(k1 + k2 + 1, mu - 1))
        for k in kappas:
            for m1 in _halves(k1 + 1, mu - k2 - 1):
                try:
                    L = CGPosLabel(k1, m1, k2, HalfInt(mu - m1), k, mu)
                except CGDomainError:
                    continue
                if L.admissible:
                    out.append(L)
    elif kind == "mixed":
        k, mu, j, m = (HalfInt(fixed[x]) for x in ("kappa", "mu", "j", "m"))
        mup = HalfInt(mu + m)
        kps = [HalfInt(fixed["kappa_p"])] if fixed.get("kappa_p") is not None else list(
            _halves(abs(k - j), k + j))
        for kp in kps:
            L = CGMixedLabel(k, mu, j, m, kp, mup)
            if L.admissible:
                out.append(L)
    else:
        raise ValueError("kind must be 'pos' or 'mixed'")
    return out

"""Generator actions for the positive discrete series of su_q(1,1) and for su_q(2).

Basis vectors are ``|kappa mu>`` with ``mu = kappa+1, kappa+2, ...`` for
su_q(1,1) and ``|j m>`` with ``-j <= m <= j`` for su_q(2).  Ladder
operators never raise on invalid targets: they return a
:class:`LadderResult` with coefficient 0 and ``label=None``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .qcore import HalfInt, QContext, qfact, qnum, qbinom

__all__ = [
    "PosSeriesLabel",
    "FiniteRepLabel",
    "LadderResult",
    "CoupledTerm",
    "k0_action",
    "kpm_action",
    "kpm_power_coeff",
    "casimir_eigenvalue",
    "jpm_action",
    "coupled_generator_term",
]


def _sign(sign) -> int:
    if sign in (+1, "+", "plus"):
        return +1
    if sign in (-1, "-", "minus"):
        return -1
    raise ValueError(f"sign must be +1/-1 or '+'/'-', got {sign!r}")


def _half(x) -> HalfInt:
    return x if isinstance(x, HalfInt) else HalfInt(x)


@dataclass(frozen=True)
class PosSeriesLabel:
    """Basis label ``|kappa mu>`` of the positive discrete series D^{kappa+}."""

    kappa: HalfInt
    mu: HalfInt

    def __post_init__(self):
        object.__setattr__(self, "kappa", _half(self.kappa))
        object.__setattr__(self, "mu", _half(self.mu))
        if self.kappa < 0:
            raise ValueError(f"kappa must be >= 0, got {self.kappa}")
        d = self.mu - self.kappa
        if d.denominator != 1 or d < 1:
            raise ValueError(f"mu={self.mu} must be kappa+1, kappa+2, ... (kappa={self.kappa})")

    @classmethod
    def maybe(cls, kappa, mu) -> Optional["PosSeriesLabel"]:
        try:
            return cls(kappa, mu)
        except ValueError:
            return None


@dataclass(frozen=True)
class FiniteRepLabel:
    """Basis label ``|j m>`` of the (2j+1)-dimensional su_q(2) representation."""

    j: HalfInt
    m: HalfInt

    def __post_init__(self):
        object.__setattr__(self, "j", _half(self.j))
        object.__setattr__(self, "m", _half(self.m))
        if self.j < 0:
            raise ValueError(f"j must be >= 0, got {self.j}")
        d = self.j - self.m
        if d.denominator != 1 or abs(self.m) > self.j:
            raise ValueError(f"m={self.m} must lie in -j..j in integer steps (j={self.j})")

    @classmethod
    def maybe(cls, j, m) -> Optional["FiniteRepLabel"]:
        try:
            return cls(j, m)
        except ValueError:
            return None


@dataclass(frozen=True)
class LadderResult:
    coefficient: object
    label: Union[PosSeriesLabel, FiniteRepLabel, None]

    @property
    def annihilated(self) -> bool:
        return self.label is None


def k0_action(s: PosSeriesLabel) -> HalfInt:
    """Eigenvalue of K0 on ``|kappa mu>``."""
    return s.mu


def kpm_action(sign, s: PosSeriesLabel, ctx: QContext) -> LadderResult:
    """Single K+ or K- step."""
    return kpm_power_coeff(sign, 1, s, ctx)


def kpm_power_coeff(sign, r: int, s: PosSeriesLabel, ctx: QContext) -> LadderResult:
    """``K_+^r`` or ``K_-^r`` on ``|kappa mu>`` in closed form.

    K+^r: sqrt([mu-k+r-1]! [mu+k+r]! / ([mu-k-1]! [mu+k]!))
    K-^r: sqrt([mu-k-1]! [mu+k]! / ([mu-k-r-1]! [mu+k-r]!)), zero below the minimal weight.
    """
    sign = _sign(sign)
    r = int(r)
    if r < 0:
        raise ValueError("power must be >= 0")
    k, mu = s.kappa, s.mu
    if r == 0:
        return LadderResult(ctx.mp.one, s)
    if sign > 0:
        num = qfact(mu - k + r - 1, ctx) * qfact(mu + k + r, ctx)
        den = qfact(mu - k - 1, ctx) * qfact(mu + k, ctx)
        return LadderResult(ctx.mp.sqrt(num / den), PosSeriesLabel(k, mu + r))
    if mu - k - 1 - r < 0:
        return LadderResult(ctx.mp.zero, None)
    num = qfact(mu - k - 1, ctx) * qfact(mu + k, ctx)
    den = qfact(mu - k - 1 - r, ctx) * qfact(mu + k - r, ctx)
    return LadderResult(ctx.mp.sqrt(num / den), PosSeriesLabel(k, mu - r))


def casimir_eigenvalue(kappa, ctx: QContext):
    """``[kappa+1][kappa]``; any rational kappa is accepted."""
    kappa = Fraction(kappa)
    return qnum(kappa + 1, ctx) * qnum(kappa, ctx)


def jpm_action(sign, s: FiniteRepLabel, r: int, ctx: QContext) -> LadderResult:
    """``J_+^r`` or ``J_-^r`` on ``|j m>``; zero once the target leaves ``[-j, j]``."""
    sign = _sign(sign)
    r = int(r)
    if r < 0:
        raise ValueError("power must be >= 0")
    j, m = s.j, s.m
    if r == 0:
        return LadderResult(ctx.mp.one, s)
    target = FiniteRepLabel.maybe(j, m + sign * r)
    if target is None:
        return LadderResult(ctx.mp.zero, None)
    if sign > 0:
        num = qfact(j - m, ctx) * qfact(j + m + r, ctx)
        den = qfact(j + m, ctx) * qfact(j - m - r, ctx)
    else:
        num = qfact(j + m, ctx) * qfact(j - m + r, ctx)
        den = qfact(j - m, ctx) * qfact(j + m - r, ctx)
    return LadderResult(ctx.mp.sqrt(num / den), target)


@dataclass(frozen=True)
class CoupledTerm:
    """One addend of the binomial expansion of ``K_\\pm(12)^r``.

    The operator is ``prefactor * sign * X1^first_power X2^second_power
    q^{weight2_exp * W2 + weight1_exp * W1}`` where ``W1, W2`` are the
    weights of the two factors (applied first, i.e. rightmost).
    """

    kind: str
    ladder: int
    ell: int
    r: int
    prefactor: object
    sign: int
    first_power: int
    second_power: int
    weight1_exp: int
    weight2_exp: int


def coupled_generator_term(kind: str, sign, ell: int, r: int, ctx: QContext) -> CoupledTerm:
    """Term ``ell`` of ``K_\\pm(12)^r`` (``kind='pos_pos'``) or ``K'_\\pm(12)^r`` (``'mixed'``)."""
    if kind not in ("pos_pos", "mixed"):
        raise ValueError(f"unknown kind {kind!r}")
    sgn = _sign(sign)
    ell, r = int(ell), int(r)
    if not 0 <= ell <= r:
        raise ValueError(f"need 0 <= ell <= r, got ell={ell}, r={r}")
    sign_factor = sgn ** (r - ell) if kind == "mixed" else 1
    return CoupledTerm(
        kind=kind,
        ladder=sgn,
        ell=ell,
        r=r,
        prefactor=qbinom(r, ell, ctx),
        sign=sign_factor,
        first_power=ell,
        second_power=r - ell,
        weight1_exp=-(r - ell),
        weight2_exp=ell,
    )

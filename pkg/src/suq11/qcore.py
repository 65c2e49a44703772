"""Symmetric q-arithmetic on top of mpmath.

All numbers are produced inside a private mpmath context tied to the
working precision of a :class:`QContext`, so results never depend on the
global ``mpmath.mp`` state.  Labels and series parameters are exact
rationals (``fractions.Fraction`` / :class:`HalfInt`); they are only turned
into floating values inside :func:`qnum` and :func:`qpow`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from numbers import Rational
from typing import Sequence

from mpmath.ctx_mp import MPContext

__all__ = [
    "HalfInt",
    "QContext",
    "HypSeriesSpec",
    "PoleError",
    "qnum",
    "qpow",
    "qfact",
    "qfact_recip",
    "qpoch",
    "qhyper",
    "qhyper_regularized",
    "qbinom",
]


class HalfInt(Fraction):
    """An exact integer or half-odd-integer.

    Arithmetic falls back to plain ``Fraction`` results; wrap again with
    ``HalfInt(...)`` where the half-integer invariant must be re-asserted.
    """

    def __new__(cls, numerator=0, denominator=None):
        if isinstance(numerator, float):
            raise TypeError("HalfInt does not accept floats; use p/2 or an integer")
        self = super().__new__(cls, numerator, denominator)
        if self.denominator not in (1, 2):
            raise ValueError(f"{Fraction(self)} is not a multiple of 1/2")
        return self

    @classmethod
    def from_twice(cls, twice: int) -> "HalfInt":
        return cls(int(twice), 2)

    @classmethod
    def parse(cls, text: str) -> "HalfInt":
        """Parse ``"3"``, ``"-2"`` or ``"p/2"``.  Decimal forms are rejected."""
        text = str(text).strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"label {text!r}: use an integer or p/2, not a decimal")
        if "/" in text:
            num, den = text.split("/", 1)
            if int(den) != 2:
                raise ValueError(f"label {text!r}: denominator must be 2")
            return cls(int(num), 2)
        return cls(int(text))

    @property
    def twice(self) -> int:
        return self.numerator * (2 // self.denominator)

    @property
    def is_integer(self) -> bool:
        return self.denominator == 1

    def __repr__(self) -> str:
        return f"HalfInt({self})"


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _exact_int(x) -> int:
    f = as_fraction(x)
    if f.denominator != 1:
        raise ValueError(f"expected an integer argument, got {f}")
    return f.numerator


@lru_cache(maxsize=None)
def _mp_context(digits: int) -> MPContext:
    ctx = MPContext()
    ctx.dps = digits
    return ctx


def _coerce_q(q) -> Fraction:
    if isinstance(q, float):
        q = repr(q)
    try:
        return Fraction(q)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"invalid deformation parameter q={q!r}") from exc


@dataclass(frozen=True)
class QContext:
    """Deformation parameter ``q`` and working precision in decimal digits.

    ``q`` is kept as an exact rational so that ``1/q`` and precision changes
    are lossless.  Any positive ``q != 1`` is accepted.
    """

    q: Fraction = field(default=Fraction(1, 2))
    digits: int = 50

    def __post_init__(self):
        object.__setattr__(self, "q", _coerce_q(self.q))
        if self.q <= 0 or self.q == 1:
            raise ValueError(f"q must be positive and different from 1, got {self.q}")
        if int(self.digits) < 20:
            raise ValueError(f"digits must be >= 20, got {self.digits}")
        object.__setattr__(self, "digits", int(self.digits))
        # contexts are cache keys everywhere; hashing the Fraction each time is slow
        object.__setattr__(self, "_hash", hash((self.q, self.digits)))

    def __hash__(self) -> int:
        return self._hash

    @property
    def mp(self) -> MPContext:
        return _mp_context(self.digits)

    @cached_property
    def qval(self):
        return self.mpf(self.q)

    def mpf(self, x):
        """Convert an exact rational (or anything mpmath accepts) at this precision."""
        if isinstance(x, Fraction):
            return self.mp.mpf(x.numerator) / x.denominator
        return self.mp.mpf(x)

    def inverse(self) -> "QContext":
        return QContext(1 / self.q, self.digits)

    def with_digits(self, digits: int) -> "QContext":
        return QContext(self.q, digits)

    def guarded(self, extra: int) -> "QContext":
        return QContext(self.q, self.digits + max(0, int(extra)))

    def guard_for(self, size) -> int:
        """Extra digits that absorb cancellation in sums whose q-factorials reach ``size``.

        ``[n]_q!`` grows like ``q^{-n^2/2}``, so the loss in an alternating sum
        of such terms scales with ``|log10 q| * size^2``.
        """
        lq = abs(math.log10(float(self.q)))
        size = float(size)
        return 10 + math.ceil(lq * size * size / 2)

    def tol(self, slack: int):
        """``10^{-(digits - slack)}`` at this precision."""
        return self.mp.mpf(10) ** (-(self.digits - slack))

    def __str__(self) -> str:
        return f"q={self.q} ({self.digits} digits)"


def qpow(e, ctx: QContext):
    """``q**e`` for an exact rational exponent (or a real one)."""
    if isinstance(e, (int, Fraction)):
        e = as_fraction(e)
        if e.denominator == 1:
            return ctx.qval ** e.numerator
        return ctx.mp.power(ctx.qval, ctx.mpf(e))
    return ctx.mp.power(ctx.qval, e)


@lru_cache(maxsize=65536)
def _qnum_exact(x: Fraction, ctx: QContext):
    if x == 0:
        return ctx.mp.zero
    qx = qpow(x, ctx)
    return (qx - 1 / qx) / (ctx.qval - 1 / ctx.qval)


def qnum(x, ctx: QContext):
    """Symmetric quantum number ``(q^x - q^{-x}) / (q - q^{-1})``."""
    if isinstance(x, (int, Fraction)):
        return _qnum_exact(as_fraction(x), ctx)
    qx = ctx.mp.power(ctx.qval, x)
    return (qx - 1 / qx) / (ctx.qval - 1 / ctx.qval)


@lru_cache(maxsize=16384)
def _qfact(n: int, ctx: QContext):
    if n == 0:
        return ctx.mp.one
    return _qfact(n - 1, ctx) * _qnum_exact(Fraction(n), ctx)


def qfact(n, ctx: QContext):
    """``[n]_q! = [1]_q [2]_q ... [n]_q`` for integer ``n >= 0``."""
    if type(n) is not int:
        n = _exact_int(n)
    if n < 0:
        raise ValueError(f"q-factorial of a negative integer ({n}); use qfact_recip")
    return _qfact(n, ctx)


def qfact_recip(n, ctx: QContext):
    """``1/[n]_q!``, exactly zero for negative ``n``."""
    if type(n) is not int:
        n = _exact_int(n)
    if n < 0:
        return ctx.mp.zero
    return 1 / _qfact(n, ctx)


def qpoch(a, n: int, ctx: QContext):
    """Symmetric q-Pochhammer ``(a|q)_n = [a][a+1]...[a+n-1]``."""
    n = int(n)
    if n < 0:
        raise ValueError("qpoch needs n >= 0")
    result = ctx.mp.one
    exact = isinstance(a, (int, Fraction))
    for m in range(n):
        result *= qnum(as_fraction(a) + m if exact else a + m, ctx)
    return result


def qbinom(n: int, k: int, ctx: QContext):
    """q-binomial ``[n]!/([k]![n-k]!)``; zero outside ``0 <= k <= n``."""
    if k < 0 or k > n:
        return ctx.mp.zero
    return qfact(n, ctx) * qfact_recip(k, ctx) * qfact_recip(n - k, ctx)


class PoleError(ArithmeticError):
    """A lower parameter vanishes before the series terminates."""

    def __init__(self, index: int, value, k: int):
        self.index = index
        self.value = value
        self.k = k
        super().__init__(
            f"lower parameter b[{index}]={value} gives a zero q-Pochhammer at k={k}, "
            "before the series terminates"
        )


def _nonpositive_int(x) -> int | None:
    if isinstance(x, (int, Fraction)):
        f = as_fraction(x)
        if f.denominator == 1 and f <= 0:
            return -f.numerator
    return None


@dataclass(frozen=True)
class HypSeriesSpec:
    """Parameters of a terminating symmetric series ``_{p+1}F_p(upper; lower | q, z)``.

    ``upper`` and ``lower`` hold exact rationals; ``z`` is a real (usually a
    power of ``q`` produced by :func:`qpow`).
    """

    upper: tuple
    lower: tuple
    z: object

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(as_fraction(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(as_fraction(b) for b in self.lower))
        if len(self.upper) != len(self.lower) + 1:
            raise ValueError("need exactly one more upper than lower parameter")
        if self.terminating_index is None:
            raise ValueError("no upper parameter is a nonpositive integer; series does not terminate")

    @property
    def terminating_index(self) -> int | None:
        ns = [n for n in map(_nonpositive_int, self.upper) if n is not None]
        return min(ns) if ns else None

    def first_pole(self, skip: Sequence[int] = ()) -> tuple[int, int] | None:
        """``(index, k)`` of the first zero denominator before termination, if any."""
        n = self.terminating_index
        worst = None
        for i, b in enumerate(self.lower):
            if i in skip:
                continue
            m = _nonpositive_int(b)
            if m is not None and m + 1 <= n:
                if worst is None or m + 1 < worst[1]:
                    worst = (i, m + 1)
        return worst


def _series(spec: HypSeriesSpec, ctx: QContext, regularize: int | None):
    n = spec.terminating_index
    z = spec.z if not isinstance(spec.z, (int, Fraction)) else ctx.mpf(as_fraction(spec.z))
    total = ctx.mp.zero
    term = ctx.mp.one
    # ratio recursion: term_{k+1}/term_k = prod[a+k] / (prod[b+k] [k+1]) * z
    reg_b = spec.lower[regularize] if regularize is not None else None
    for k in range(n + 1):
        if regularize is None:
            total += term
        else:
            total += term * qfact_recip(reg_b - 1 + k, ctx)
        if k == n:
            break
        num = ctx.mp.one
        for a in spec.upper:
            num *= qnum(a + k, ctx)
        den = qnum(k + 1, ctx)
        for i, b in enumerate(spec.lower):
            if i != regularize:
                den *= qnum(b + k, ctx)
        if num == 0:
            break
        term = term * num / den * z
    return total


def qhyper(spec: HypSeriesSpec, ctx: QContext):
    """Evaluate the terminating series, summing ``k = 0 .. terminating_index``.

    Raises :class:`PoleError` when a lower parameter hits a zero before the
    series terminates.
    """
    pole = spec.first_pole()
    if pole is not None:
        index, k = pole
        raise PoleError(index, spec.lower[index], k)
    return _series(spec, ctx, None)


def qhyper_regularized(spec: HypSeriesSpec, ctx: QContext, lower_index: int):
    """The series divided by ``[b-1]_q!`` where ``b = spec.lower[lower_index]``.

    Each term carries ``1/[b-1+k]_q!`` instead of ``1/(b|q)_k``, which stays
    finite when ``b`` is a nonpositive integer (the leading terms then vanish).
    ``b`` must be an integer.
    """
    b = spec.lower[lower_index]
    if b.denominator != 1:
        raise ValueError("regularised lower parameter must be an integer")
    pole = spec.first_pole(skip=(lower_index,))
    if pole is not None:
        index, k = pole
        raise PoleError(index, spec.lower[index], k)
    return _series(spec, ctx, lower_index)

"""Verification suites shared by the command line and the test-suite.

Each suite returns a :class:`Report`: a list of :class:`Check` results (one
per identity family, with the largest residual seen) plus free-text
findings.  Randomised suites draw labels from ``random.Random(seed)`` so a
given configuration always checks the same labels.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, List

from .cgc import (
    MIXED_SPECIAL,
    POS_SPECIAL,
    CGMethod,
    CGMixedLabel,
    CGPosLabel,
    cg_mixed,
    cg_pos,
    enumerate_couplings,
    recurrence_residual,
    special_value_mixed,
    special_value_pos,
    symmetry_check_pos,
)
from .oracle import coupled_vectors
from .qcore import HalfInt, QContext
from .qhahn import (
    CONNECTIONS,
    POS_DUAL_SIGN,
    RESIDUALS,
    DualHahnSpec,
    HahnSpec,
    cg_from_polynomials,
    orthogonality_sum,
    residual,
    weight_and_norm,
)

SUITES = ("identities", "orthogonality", "symmetry", "recurrences", "oracle", "qhahn")

# Tolerances are 10^-(digits - slack); at 50 digits these give 1e-35, 1e-30, 1e-25.
SLACK = {"identities": 15, "symmetry": 15, "qhahn": 15, "oracle": 20, "orthogonality": 20,
         "connections": 20, "recurrences": 25}

_H = HalfInt.from_twice


@dataclass
class Check:
    suite: str
    name: str
    count: int
    max_residual: object
    tolerance: object

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance


@dataclass
class Report:
    checks: List[Check] = field(default_factory=list)
    findings: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def extend(self, other: "Report") -> "Report":
        self.checks += other.checks
        self.findings += other.findings
        return self

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


@dataclass(frozen=True)
class VerifyConfig:
    q: Fraction = Fraction(1, 2)
    digits: int = 50
    seed: int = 0
    trials: int = 100
    max_mu: int = 10

    @property
    def ctx(self) -> QContext:
        return QContext(self.q, self.digits)

    def tol(self, suite: str):
        return self.ctx.tol(SLACK[suite])


class _Max:
    """Running maximum of residuals over a family of labels."""

    def __init__(self, ctx: QContext):
        self.value = ctx.mp.zero
        self.count = 0
        self.worst = None

    def add(self, r, where=None):
        self.count += 1
        if self.worst is None or r > self.value:
            self.value, self.worst = r, where

    def check(self, suite, name, tol) -> Check:
        return Check(suite, name, self.count, self.value, tol)


def _rel(a, b, ctx):
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 1 else abs(a - b)


# --- label generators ---------------------------------------------------------

def random_pos_label(rng: random.Random, max_twice: int = 15) -> CGPosLabel:
    """Admissible positive-series label with every label at most ``max_twice / 2``."""
    while True:
        t1, t2 = rng.randint(0, max_twice), rng.randint(0, max_twice)
        a, b = rng.randint(0, max_twice // 2), rng.randint(0, max_twice // 2)
        mu_t = t1 + t2 + 4 + 2 * (a + b)
        if mu_t > max_twice:
            continue
        n = rng.randint(0, a + b)
        return CGPosLabel(_H(t1), _H(t1 + 2 + 2 * a), _H(t2), _H(t2 + 2 + 2 * b), _H(t1 + t2 + 2 + 2 * n), _H(mu_t))


def random_mixed_label(rng: random.Random, max_twice: int = 15, interior: bool = False) -> CGMixedLabel:
    """Admissible mixed label with every |label| at most ``max_twice / 2``.

    ``interior=True`` keeps ``m`` and ``kappa'`` off the edges of their ranges
    and ``mu' >= kappa' + 2``, so every neighbouring label exists.
    """
    while True:
        tk, tj = rng.randint(0, max_twice), rng.randint(0, max_twice)
        tm = tj - 2 * rng.randint(0, tj)
        kp_lo, kp_hi = abs(tk - tj), tk + tj
        tkp = kp_hi - 2 * rng.randint(0, (kp_hi - kp_lo) // 2)
        tmu = tk + 2 + 2 * rng.randint(0, max_twice // 2)
        tmup = tmu + tm
        if max(tmu, tmup, tkp, tk, tj) > max_twice or tmup < tkp + 2:
            continue
        if interior and not (abs(tm) < tj and kp_lo < tkp < kp_hi and tmup >= tkp + 4):
            continue
        return CGMixedLabel(_H(tk), _H(tmu), _H(tj), _H(tm), _H(tkp), _H(tmup))


def pos_labels_up_to(max_mu) -> List[CGPosLabel]:
    """Every admissible positive-series label with ``mu <= max_mu``."""
    top = 2 * Fraction(max_mu)
    out = []
    for t1 in range(int(top) - 3):
        for t2 in range(int(top) - 3 - t1):
            for tm in range(t1 + t2 + 4, int(top) + 1, 2):
                out += enumerate_couplings("pos", kappa1=_H(t1), kappa2=_H(t2), mu=_H(tm))
    return out


def mixed_labels_up_to(max_total) -> List[CGMixedLabel]:
    """Every admissible mixed label with ``mu + j <= max_total``."""
    top = int(2 * Fraction(max_total))
    out = []
    for tk in range(top - 1):
        for tj in range(top - tk - 1):
            for tmu in range(tk + 2, top - tj + 1, 2):
                for tm in range(-tj, tj + 1, 2):
                    out += enumerate_couplings("mixed", kappa=_H(tk), mu=_H(tmu), j=_H(tj), m=_H(tm))
    return out


# --- suites -------------------------------------------------------------------

def suite_identities(cfg: VerifyConfig) -> Report:
    """Normalisations, agreement of all summation/hypergeometric forms, special values."""
    ctx, rng, tol = cfg.ctx, random.Random(cfg.seed), cfg.tol("identities")
    rep = Report()

    norm = _Max(ctx)
    for t1 in range(11):
        for t2 in range(11):
            L = CGPosLabel(_H(t1), _H(t1 + 2), _H(t2), _H(t2 + 2), _H(t1 + t2 + 2), _H(t1 + t2 + 4))
            for method in CGMethod:
                norm.add(abs(cg_pos(L, method, ctx) - 1), L)
    for tk in range(11):
        for tj in range(tk + 1):
            L = CGMixedLabel(_H(tk), _H(tk + 2), _H(tj), _H(-tj), _H(tk - tj), _H(tk - tj + 2))
            for method in CGMethod:
                norm.add(abs(cg_mixed(L, method, ctx) - 1), L)
    rep.checks.append(norm.check("identities", "normalization", tol))

    for kind, gen, fn in (("pos", random_pos_label, cg_pos), ("mixed", random_mixed_label, cg_mixed)):
        agree = _Max(ctx)
        for _ in range(cfg.trials):
            L = gen(rng)
            vals = [fn(L, method, ctx) for method in CGMethod]
            for a in vals[1:]:
                agree.add(_rel(a, vals[0], ctx), L)
        rep.checks.append(agree.check("identities", f"five_way_{kind}", tol))

    for kind, names, special, fn, labels in (
        ("pos", POS_SPECIAL, special_value_pos, cg_pos, pos_labels_up_to(7)),
        ("mixed", MIXED_SPECIAL, special_value_mixed, cg_mixed, mixed_labels_up_to(6)),
    ):
        for which in names:
            sv = _Max(ctx)
            for L in labels:
                try:
                    v = special(which, L, ctx)
                except ValueError:
                    continue
                sv.add(_rel(v, fn(L, CGMethod.SUM_FWD, ctx), ctx), L)
            rep.checks.append(sv.check("identities", f"special_{kind}_{which}", tol))
    return rep


def _orth_pos(kappa1, kappa2, mu, ctx, mu1_top=None):
    """Largest deviation from the Kronecker delta of both sums at fixed (kappa1, kappa2, mu).

    ``mu1_top`` truncates the sum over mu1 (the natural limit is mu-kappa2-1).
    """
    labels = enumerate_couplings("pos", kappa1=kappa1, kappa2=kappa2, mu=mu)
    vals = {(L.kappa, L.mu1): cg_pos(L, CGMethod.SUM_FWD, ctx) for L in labels}
    kappas = sorted({k for k, _ in vals})
    mu1s = sorted({m for _, m in vals})
    first = second = ctx.mp.zero
    for k in kappas:
        for kp in kappas:
            s = sum(vals[(k, m)] * vals[(kp, m)] for m in mu1s if mu1_top is None or m <= mu1_top)
            first = max(first, abs(s - (1 if k == kp else 0)))
    for m in mu1s:
        for mp in mu1s:
            s = sum(vals[(k, m)] * vals[(k, mp)] for k in kappas)
            second = max(second, abs(s - (1 if m == mp else 0)))
    return first, second


def suite_orthogonality(cfg: VerifyConfig) -> Report:
    """Both orthogonality relations for every (kappa1, kappa2, mu) with mu <= max_mu."""
    ctx, tol = cfg.ctx, cfg.tol("orthogonality")
    rep = Report()
    first, second, printed = _Max(ctx), _Max(ctx), _Max(ctx)
    top = 2 * cfg.max_mu
    for t1 in range(top - 3):
        for t2 in range(top - 3 - t1):
            for tm in range(t1 + t2 + 4, top + 1, 2):
                k1, k2, mu = _H(t1), _H(t2), _H(tm)
                a, b = _orth_pos(k1, k2, mu, ctx)
                first.add(a, (k1, k2, mu))
                second.add(b, (k1, k2, mu))
                c, _ = _orth_pos(k1, k2, mu, ctx, mu1_top=mu - k1 - k2 - 1)
                printed.add(c, (k1, k2, mu))
    rep.checks.append(first.check("orthogonality", "sum_over_mu1", tol))
    rep.checks.append(second.check("orthogonality", "sum_over_kappa", tol))
    verdict = "fails" if printed.value > tol else "holds"
    rep.findings.append(
        f"mu1-sum upper limit mu-kappa2-1 confirmed (max deviation {_fmt(first.value, ctx)}); "
        f"the limit mu-kappa1-kappa2-1 {verdict} (max deviation {_fmt(printed.value, ctx)}"
        + (f", first at kappa1,kappa2,mu = {', '.join(map(str, printed.worst))})" if printed.worst else ")"))
    return rep


def suite_symmetry(cfg: VerifyConfig) -> Report:
    """``C(q) = (-1)^n C(swapped, 1/q)`` on randomised positive labels."""
    ctx, rng = cfg.ctx, random.Random(cfg.seed)
    sym = _Max(ctx)
    for _ in range(cfg.trials):
        L = random_pos_label(rng)
        lhs, rhs = symmetry_check_pos(L, ctx)
        sym.add(_rel(lhs, rhs, ctx), L)
    return Report([sym.check("symmetry", "swap_and_invert_q", cfg.tol("symmetry"))])


def suite_recurrences(cfg: VerifyConfig) -> Report:
    """Three-term recurrences c1, c2, c3 on randomised interior mixed labels."""
    ctx, rng = cfg.ctx, random.Random(cfg.seed)
    labels = [random_mixed_label(rng, interior=True) for _ in range(cfg.trials)]
    rep = Report()
    for which in ("c1", "c2", "c3"):
        rec = _Max(ctx)
        for L in labels:
            rec.add(recurrence_residual(which, L, ctx), L)
        chk = rec.check("recurrences", which, cfg.tol("recurrences"))
        rep.checks.append(chk)
        if not chk.passed:
            rep.findings.append(
                f"recurrence {which} does not hold: max scale-relative residual {_fmt(chk.max_residual, ctx)}"
                f" at {_label_text(rec.worst)}")
    return rep


def _oracle_key(L):
    if isinstance(L, CGPosLabel):
        return ("pos_pos", L.kappa1, L.kappa2, L.kappa), L.mu, (L.mu1, L.mu2)
    return ("mixed", L.kappa, L.j, L.kappa_p), L.mu_p, (L.mu, L.m)


def suite_oracle(cfg: VerifyConfig) -> Report:
    """Closed forms against the projection-series and kernel oracles, all labels up to max_mu.

    Labels sharing the outer labels share one oracle raising chain.
    """
    ctx, tol = cfg.ctx, cfg.tol("oracle")
    rep = Report()
    for kind, labels, fn in (("pos", pos_labels_up_to(cfg.max_mu), cg_pos),
                             ("mixed", mixed_labels_up_to(cfg.max_mu), cg_mixed)):
        groups: dict = {}
        for L in labels:
            key, mu, _ = _oracle_key(L)
            groups.setdefault(key, []).append(L)
        res = {"projection": _Max(ctx), "kernel": _Max(ctx)}
        for key, members in groups.items():
            top = max(_oracle_key(L)[1] for L in members)
            for method, acc in res.items():
                vecs = coupled_vectors(*key, top, ctx, method=method)
                for L in members:
                    _, mu, pair = _oracle_key(L)
                    ref = vecs[mu].get(tuple(map(Fraction, pair)), ctx.mp.zero)
                    acc.add(abs(fn(L, CGMethod.SUM_FWD, ctx) - ref), L)
        rep.checks.append(res["projection"].check("oracle", f"{kind}_projection", tol))
        rep.checks.append(res["kernel"].check("oracle", f"{kind}_kernel", tol))
    return rep


def qhahn_specs(max_N: int = 12, max_n: int = 6) -> Iterable:
    """Parameter sets for the polynomial suite: orthogonal and non-orthogonal.

    Sets with ``alpha+beta`` a negative integer are avoided; there the
    recurrence coefficients have poles.
    """
    for N in (3, 7, max_N):
        for alpha, beta in ((0, 0), (3, 2), (Fraction(1, 2), Fraction(3, 2)),
                            (5, -3), (Fraction(7, 2), Fraction(-5, 2)), (6, -2)):
            for n in range(min(max_n, N - 1) + 1):
                yield HahnSpec(n, N, alpha, beta)
        for a, c in ((0, 0), (1, -1), (Fraction(1, 2), Fraction(1, 2)), (2, 2), (Fraction(3, 2), Fraction(-7, 2))):
            for n in range(min(max_n, N - 1) + 1):
                yield DualHahnSpec(n, a, a + N, c)


def suite_qhahn(cfg: VerifyConfig) -> Report:
    """Difference equation, recurrence, ladder relations, orthogonality and the CG connections."""
    ctx, rng = cfg.ctx, random.Random(cfg.seed)
    rep = Report()
    specs = list(qhahn_specs())
    for which in RESIDUALS:
        for family in ("hahn", "dual"):
            best, printed, singular = _Max(ctx), _Max(ctx), []
            for spec in specs:
                if (family == "hahn") != isinstance(spec, HahnSpec):
                    continue
                if which in ("lowering", "raising") and spec.n > spec.N - 2:
                    continue
                for s in spec.support:
                    best.add(residual(which, spec, s, ctx), (spec, s))
                    try:
                        printed.add(residual(which, spec, s, ctx, printed=True), (spec, s))
                    except ValueError:
                        singular.append(spec)
            rep.checks.append(best.check("qhahn", f"{which}_{family}", cfg.tol("qhahn")))
            if printed.value > cfg.tol("qhahn"):
                rep.findings.append(f"{family} {which} with the literal table entries: residual up to "
                                    f"{_fmt(printed.value, ctx)}")
            if singular:
                rep.findings.append(f"{family} {which} with the literal table entries: singular for "
                                    f"{len(set(singular))} parameter sets, e.g. {singular[0]}")

    for family in ("hahn", "dual"):
        orth = _Max(ctx)
        for spec in specs:
            if (family == "hahn") != isinstance(spec, HahnSpec) or not spec.orthogonal:
                continue
            if not _integral_weight(spec):
                continue
            d2 = weight_and_norm(spec, spec.support[0], ctx)["d2"]
            for m in range(min(6, spec.N - 1) + 1):
                delta = d2 if m == spec.n else 0
                orth.add(abs(orthogonality_sum(spec, m, ctx) - delta) / abs(d2), (spec, m))
        rep.checks.append(orth.check("qhahn", f"orthogonality_{family}", cfg.tol("orthogonality")))

    for which in CONNECTIONS:
        conn = _Max(ctx)
        gen = random_pos_label if which.startswith("pos") else random_mixed_label
        fn = cg_pos if which.startswith("pos") else cg_mixed
        for _ in range(cfg.trials):
            L = gen(rng)
            conn.add(_rel(cg_from_polynomials(which, L, ctx), fn(L, CGMethod.SUM_FWD, ctx), ctx), L)
        rep.checks.append(conn.check("qhahn", f"connection_{which}", cfg.tol("connections")))
    rep.findings.append(f"dual q-Hahn connection sign for two positive series: {POS_DUAL_SIGN}")
    return rep


def _integral_weight(spec) -> bool:
    # the weight uses q-factorials, defined here for integer arguments only
    if isinstance(spec, HahnSpec):
        return spec.alpha.denominator == 1 and spec.beta.denominator == 1
    return all(x.denominator == 1 for x in (spec.a, spec.b, spec.c))


_SUITE_FUNCS: dict = {
    "identities": suite_identities,
    "orthogonality": suite_orthogonality,
    "symmetry": suite_symmetry,
    "recurrences": suite_recurrences,
    "oracle": suite_oracle,
    "qhahn": suite_qhahn,
}


def run_suite(name: str, cfg: VerifyConfig) -> Report:
    if name == "all":
        rep = Report()
        for s in SUITES:
            rep.extend(_SUITE_FUNCS[s](cfg))
        return rep
    try:
        return _SUITE_FUNCS[name](cfg)
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}") from None


# --- formatting -----------------------------------------------------------------

def _fmt(x, ctx: QContext) -> str:
    return ctx.mp.nstr(x, 3) if x else "0"


def _label_text(L) -> str:
    if L is None:
        return "-"
    return "(" + ", ".join(f"{n}={v}" for n, v in zip(L.names, L.as_tuple())) + ")"

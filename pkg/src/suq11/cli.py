"""Command-line front end.

    suq11 cg pos --k1 0 --k2 0 --mu 3 --q 0.5
    suq11 cg mixed --k 1 --mu 2 --j 1 --m -1
    suq11 verify symmetry --q 0.7 --trials 50 --seed 1
    suq11 qhahn hahn --n 2 --N 6 --alpha 1 --beta 1

Labels are integers or halves written ``p/2``.  Output is JSON lines, CSV
(header row, LF endings) or plain text, always in lexicographic order of
the twice-value label tuples.  Exit codes: 0 ok, 1 usage, 2 domain error,
3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence

from . import qhahn as qh
from .cgc import CGDomainError, CGMethod, CGMixedLabel, CGPosLabel, cg_mixed, cg_pos
from .oracle import cg_oracle, cg_oracle_kernel
from .qcore import HalfInt, QContext
from .verify import SUITES, Report, VerifyConfig, run_suite

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2, 3

PROVENANCE = ("closed_form", "oracle", "polynomial")
METHODS = {
    "closed_form": tuple(m.value for m in CGMethod),
    "oracle": ("projection", "kernel"),
    "polynomial": ("hahn", "dual"),
}

# JSON schema of one coefficient record
RECORD_SCHEMA = {
    "type": "object",
    "required": ["kind", "labels", "method", "q", "digits", "value", "provenance"],
    "properties": {
        "kind": {"enum": ["pos", "mixed"]},
        "labels": {"type": "object", "additionalProperties": {"type": "integer"}},
        "method": {"type": "string"},
        "q": {"type": "string"},
        "digits": {"type": "integer"},
        "value": {"type": "string"},
        "provenance": {"enum": list(PROVENANCE)},
        "note": {"type": "string"},
    },
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --- config ------------------------------------------------------------------

def parse_q(text: str) -> Fraction:
    """``0.5``, ``7/10`` or ``2``; any positive value except 1."""
    try:
        q = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--q {text!r} is not a number") from None
    if q <= 0 or q == 1:
        raise UsageError(f"--q must be positive and different from 1, got {text}")
    return q


def format_q(q: Fraction) -> str:
    """Exact decimal when one exists, otherwise ``p/r``."""
    d = q.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    scale = 0
    while (q * 10 ** scale).denominator != 1:
        scale += 1
    digits = str(abs(q.numerator) * 10 ** scale // q.denominator).rjust(scale + 1, "0")
    text = digits if scale == 0 else digits[:-scale] + "." + digits[-scale:]
    return ("-" if q < 0 else "") + text


def parse_label(text: str, name: str) -> HalfInt:
    try:
        return HalfInt.parse(text)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"--{name}: {exc}") from None


def parse_rational(text: str, name: str) -> Fraction:
    """Exact integer or ``p/r``; decimals are rejected like labels."""
    if "." in text or "e" in text.lower():
        raise UsageError(f"--{name} {text!r}: use an integer or p/r, not a decimal")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--{name} {text!r} is not a rational number") from None


@dataclass(frozen=True)
class RunConfig:
    q: Fraction
    digits: int
    format: str
    seed: int
    include_zeros: bool
    tolerance: Optional[Fraction] = None

    def __post_init__(self):
        if self.digits < 20:
            raise UsageError(f"--digits must be >= 20, got {self.digits}")

    @property
    def ctx(self) -> QContext:
        return QContext(self.q, self.digits)


def _value(x, ctx: QContext) -> str:
    return ctx.mp.nstr(x, ctx.digits)


# --- cg ----------------------------------------------------------------------

def _halves(lo, hi) -> Iterator[HalfInt]:
    x = HalfInt(lo)
    while x <= hi:
        yield x
        x = HalfInt(x + 1)


def _pos_candidates(a) -> List[CGPosLabel]:
    k1, k2, mu = (parse_label(getattr(a, x), x.replace("_", "")) for x in ("k1", "k2", "mu"))
    kappas = [parse_label(a.k, "k")] if a.k is not None else list(_halves(k1 + k2 + 1, mu - 1))
    mu1s = [parse_label(a.mu1, "mu1")] if a.mu1 is not None else list(_halves(k1 + 1, mu - k2 - 1))
    return [CGPosLabel(k1, m1, k2, HalfInt(mu - m1), k, mu) for k in kappas for m1 in mu1s]


def _mixed_candidates(a) -> List[CGMixedLabel]:
    k, mu, j = (parse_label(getattr(a, x), x) for x in ("k", "mu", "j"))
    if j < 0:
        raise CGDomainError(f"j={j} must be >= 0")
    ms = [parse_label(a.m, "m")] if a.m is not None else list(_halves(-j, j))
    kps = [parse_label(a.kp, "kp")] if a.kp is not None else list(_halves(abs(k - j), k + j))
    return [CGMixedLabel(k, mu, j, m, kp, HalfInt(mu + m)) for m in ms for kp in kps]


def _coefficient(kind, L, source, method, ctx):
    if source == "closed_form":
        return (cg_pos if kind == "pos" else cg_mixed)(L, CGMethod.parse(method), ctx)
    if source == "oracle":
        return (cg_oracle if method == "projection" else cg_oracle_kernel)(L, ctx)
    return qh.cg_from_polynomials(f"{kind}_{method}", L, ctx)


def cmd_cg(kind: str, args, cfg: RunConfig) -> List[dict]:
    """Coefficient records for every candidate label, sorted by twice-values."""
    source = args.source
    method = args.method or METHODS[source][0]
    if method not in METHODS[source]:
        raise UsageError(f"--method {method!r} is not valid with --source {source}; "
                         f"choose from {', '.join(METHODS[source])}")
    labels = _pos_candidates(args) if kind == "pos" else _mixed_candidates(args)
    labels.sort(key=lambda L: tuple(x.twice for x in L.as_tuple()))
    ctx = cfg.ctx
    out = []
    for L in labels:
        note = L.violation()
        if note is not None and not cfg.include_zeros:
            continue
        value = ctx.mp.zero if note is not None else _coefficient(kind, L, source, method, ctx)
        rec = {
            "kind": kind,
            "labels": {n: x.twice for n, x in zip(L.names, L.as_tuple())},
            "method": method,
            "q": format_q(cfg.q),
            "digits": cfg.digits,
            "value": _value(value, ctx),
            "provenance": source,
        }
        if note is not None:
            rec["note"] = note
        out.append(rec)
    return out


def _half_text(twice: int) -> str:
    return str(twice // 2) if twice % 2 == 0 else f"{twice}/2"


def _render_cg(records: List[dict], fmt: str) -> str:
    if fmt == "json":
        return "".join(json.dumps(r) + "\n" for r in records)
    if fmt == "csv":
        names = list(records[0]["labels"]) if records else []
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", *names, "method", "q", "digits", "value", "provenance", "note"])
        for r in records:
            w.writerow([r["kind"], *(r["labels"][n] for n in names), r["method"], r["q"], r["digits"],
                        r["value"], r["provenance"], r.get("note", "")])
        return buf.getvalue()
    lines = []
    for r in records:
        t = [_half_text(v) for v in r["labels"].values()]
        line = f"<{t[0]} {t[1]}, {t[2]} {t[3]} | {t[4]} {t[5]}> = {r['value']}"
        if "note" in r:
            line += f"  ({r['note']})"
        lines.append(line)
    return "".join(x + "\n" for x in lines)


# --- verify ------------------------------------------------------------------

def cmd_verify(suite: str, args, cfg: RunConfig) -> Report:
    vcfg = VerifyConfig(q=cfg.q, digits=cfg.digits, seed=cfg.seed, trials=args.trials, max_mu=args.max_mu)
    return run_suite(suite, vcfg)


def _render_verify(report: Report, fmt: str, ctx: QContext) -> str:
    s = lambda x: ctx.mp.nstr(x, 3) if x else "0"
    rows = [{"suite": c.suite, "check": c.name, "count": c.count, "max_residual": s(c.max_residual),
             "tolerance": s(c.tolerance), "passed": c.passed} for c in report.checks]
    if fmt == "json":
        out = [json.dumps(r) for r in rows] + [json.dumps({"finding": f}) for f in report.findings]
        out.append(json.dumps({"passed": report.passed}))
        return "".join(x + "\n" for x in out)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "check", "count", "max_residual", "tolerance", "passed", "note"])
        for r in rows:
            w.writerow([*r.values(), ""])
        for f in report.findings:
            w.writerow(["finding", "", "", "", "", "", f])
        return buf.getvalue()
    out = [f"{'PASS' if r['passed'] else 'FAIL'}  {r['suite']}/{r['check']}  n={r['count']}  "
           f"max={r['max_residual']}  tol={r['tolerance']}" for r in rows]
    out += [f"finding: {f}" for f in report.findings]
    npass = sum(r["passed"] for r in rows)
    out.append(f"{npass}/{len(rows)} checks passed")
    return "".join(x + "\n" for x in out)


# --- qhahn -------------------------------------------------------------------

def cmd_qhahn(kind: str, args, cfg: RunConfig) -> List[dict]:
    """Table of polynomial values with weight, squared norm and the orthogonality flag."""
    ctx = cfg.ctx
    try:
        if kind == "hahn":
            spec = qh.HahnSpec(args.n, args.N, parse_rational(args.alpha, "alpha"), parse_rational(args.beta, "beta"))
            params = {"n": spec.n, "N": spec.N, "alpha": str(spec.alpha), "beta": str(spec.beta)}
        else:
            spec = qh.DualHahnSpec(args.n, parse_rational(args.a, "a"), parse_rational(args.b, "b"),
                                   parse_rational(args.c, "c"))
            params = {"n": spec.n, "a": str(spec.a), "b": str(spec.b), "c": str(spec.c)}
    except ValueError as exc:
        raise CGDomainError(str(exc)) from None
    support = list(spec.support)
    lo = parse_rational(args.s_min, "s-min") if args.s_min is not None else Fraction(support[0])
    hi = parse_rational(args.s_max, "s-max") if args.s_max is not None else Fraction(support[-1])
    evaluate = qh.hahn_eval if kind == "hahn" else qh.dual_hahn_eval
    out = []
    s = lo
    while s <= hi:
        try:
            wn = qh.weight_and_norm(spec, s, ctx)
            rho, d2 = _value(wn["rho"], ctx), _value(wn["d2"], ctx)
        except (ValueError, ZeroDivisionError):
            rho = d2 = None
        out.append({
            "kind": kind,
            "params": params,
            "s": str(s),
            "q": format_q(cfg.q),
            "digits": cfg.digits,
            "value": _value(evaluate(spec, s, ctx), ctx),
            "rho": rho,
            "d2": d2,
            "orthogonal": spec.orthogonal,
        })
        s += 1
    return out


def _render_qhahn(records: List[dict], fmt: str) -> str:
    if fmt == "json":
        return "".join(json.dumps(r) + "\n" for r in records)
    names = list(records[0]["params"]) if records else []
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", *names, "s", "q", "digits", "value", "rho", "d2", "orthogonal"])
        for r in records:
            w.writerow([r["kind"], *(r["params"][n] for n in names), r["s"], r["q"], r["digits"], r["value"],
                        r["rho"] or "", r["d2"] or "", str(r["orthogonal"]).lower()])
        return buf.getvalue()
    out = []
    for r in records:
        out.append(f"s={r['s']}  value={r['value']}  rho={r['rho'] or '-'}  d2={r['d2'] or '-'}  "
                   f"orthogonal={str(r['orthogonal']).lower()}")
    return "".join(x + "\n" for x in out)


# --- argument parsing ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--q", default="0.5", help="deformation parameter (decimal or p/r), default 0.5")
    common.add_argument("--digits", type=int, default=50, help="working precision, default 50")
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised suites")
    common.add_argument("--include-zeros", action="store_true",
                        help="also emit labels that violate a selection rule (value 0, with a note)")

    p = _Parser(prog="suq11", description="Clebsch-Gordan coefficients of su_q(1,1).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    cg = sub.add_parser("cg", help="coefficient tables")
    cgsub = cg.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    for kind in ("pos", "mixed"):
        c = cgsub.add_parser(kind, parents=[common])
        c.add_argument("--source", choices=PROVENANCE, default="closed_form")
        c.add_argument("--method", help="closed_form: sum_fwd|sum_rev|hyp_a|hyp_b|hyp_c; "
                                        "oracle: projection|kernel; polynomial: hahn|dual")
        if kind == "pos":
            c.add_argument("--k1", required=True)
            c.add_argument("--k2", required=True)
            c.add_argument("--mu", required=True, help="total weight")
            c.add_argument("--k", help="coupled kappa (default: all)")
            c.add_argument("--mu1", help="first weight (default: all)")
        else:
            c.add_argument("--k", required=True, help="kappa of the positive series")
            c.add_argument("--mu", required=True)
            c.add_argument("--j", required=True)
            c.add_argument("--m", help="default: all")
            c.add_argument("--kp", help="coupled kappa' (default: all)")

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--trials", type=int, default=100, help="labels per randomised check")
    v.add_argument("--max-mu", type=int, default=10, help="weight bound of exhaustive checks")

    qp = sub.add_parser("qhahn", help="q-Hahn / dual q-Hahn tables")
    qsub = qp.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    for kind in ("hahn", "dual"):
        c = qsub.add_parser(kind, parents=[common])
        c.add_argument("--n", type=int, required=True, help="degree")
        if kind == "hahn":
            c.add_argument("--N", type=int, required=True)
            c.add_argument("--alpha", required=True)
            c.add_argument("--beta", required=True)
        else:
            c.add_argument("--a", required=True)
            c.add_argument("--b", required=True)
            c.add_argument("--c", required=True)
        c.add_argument("--s-min")
        c.add_argument("--s-max")
    return p


def run(argv: Sequence[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(parse_q(args.q), args.digits, args.format, args.seed, args.include_zeros)
        if args.command == "cg":
            out.write(_render_cg(cmd_cg(args.kind, args, cfg), cfg.format))
        elif args.command == "qhahn":
            out.write(_render_qhahn(cmd_qhahn(args.kind, args, cfg), cfg.format))
        else:
            report = cmd_verify(args.suite, args, cfg)
            out.write(_render_verify(report, cfg.format, cfg.ctx))
            return EXIT_OK if report.passed else EXIT_VERIFY
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except CGDomainError as exc:
        err.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())

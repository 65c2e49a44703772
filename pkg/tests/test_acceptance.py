"""Acceptance criteria 1-9 at 50 digits.

Each test records a one-line detail; conftest prints a pass/fail line per
criterion at the end of the session.
"""
import itertools
import json
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from suq11.cgc import CGMethod, CGMixedLabel, CGPosLabel, cg_mixed, cg_pos
from suq11.qcore import HalfInt, QContext
from suq11.qhahn import CONNECTIONS, POS_DUAL_SIGN, cg_from_polynomials
from suq11.verify import (
    VerifyConfig,
    random_mixed_label,
    random_pos_label,
    suite_oracle,
    suite_orthogonality,
    suite_qhahn,
    suite_recurrences,
    suite_symmetry,
)

DIGITS = 50
GOLDEN = json.loads((Path(__file__).parent / "golden.json").read_text())
_H = HalfInt.from_twice


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 1 else abs(a - b)


def _note(record_property, text):
    record_property("detail", text)
    print(text)


def _normalisation_labels():
    for t1, t2 in itertools.product(range(11), repeat=2):
        yield cg_pos, CGPosLabel(_H(t1), _H(t1 + 2), _H(t2), _H(t2 + 2), _H(t1 + t2 + 2), _H(t1 + t2 + 4))
    for tk in range(11):
        for tj in range(tk + 1):
            yield cg_mixed, CGMixedLabel(_H(tk), _H(tk + 2), _H(tj), _H(-tj), _H(tk - tj), _H(tk - tj + 2))


def test_criterion_1_normalisation(record_property):
    contexts = [QContext(q, DIGITS) for q in (Fraction(3, 10), Fraction(1, 2), Fraction(9, 10))]
    labels = list(_normalisation_labels())
    # timed: the default closed form on every label and q
    start = time.perf_counter()
    worst = max(abs(fn(L, CGMethod.SUM_FWD, c) - 1) for c in contexts for fn, L in labels)
    elapsed = time.perf_counter() - start
    # untimed: the remaining forms must reproduce the same normalisation
    others = max(abs(fn(L, m, c) - 1) for c in contexts for fn, L in labels for m in CGMethod
                 if m is not CGMethod.SUM_FWD)
    _note(record_property, f"{len(labels)} labels x 3 q, max |C-1| = {float(worst):.2e} "
                           f"(other forms {float(others):.2e}, tol 1e-40), {elapsed:.2f} s (limit 1 s)")
    assert worst < 1e-40 and others < 1e-40
    assert elapsed < 1.0


def test_criterion_2_five_way(record_property):
    c = QContext(Fraction(1, 2), DIGITS)
    rng = random.Random(2)
    worst = {"pos": 0, "mixed": 0}
    start = time.perf_counter()
    for kind, gen, fn in (("pos", random_pos_label, cg_pos), ("mixed", random_mixed_label, cg_mixed)):
        for _ in range(200):
            L = gen(rng)
            vals = [fn(L, m, c) for m in CGMethod]
            for a, b in itertools.combinations(vals, 2):
                worst[kind] = max(worst[kind], _rel(a, b))
    elapsed = time.perf_counter() - start
    _note(record_property, f"pairwise max pos {float(worst['pos']):.2e}, mixed {float(worst['mixed']):.2e} "
                           f"(tol 1e-35), {elapsed:.1f} s (limit 30 s)")
    assert max(worst.values()) < 1e-35
    assert elapsed < 30


@pytest.mark.slow
def test_criterion_3_oracles(record_property):
    start = time.perf_counter()
    rep = suite_oracle(VerifyConfig(q=Fraction(1, 2), digits=DIGITS, max_mu=12))
    elapsed = time.perf_counter() - start
    parts = ", ".join(f"{ch.name} n={ch.count} max={float(ch.max_residual):.1e}" for ch in rep.checks)
    _note(record_property, f"{parts} (tol 1e-30), {elapsed:.0f} s (limit 120 s)")
    assert len(rep.checks) == 4 and all(ch.count > 1000 for ch in rep.checks)
    assert all(ch.max_residual < 1e-30 for ch in rep.checks)
    assert elapsed < 120


def test_criterion_4_symmetry(record_property):
    rep = suite_symmetry(VerifyConfig(q=Fraction(7, 10), digits=DIGITS, trials=100, seed=4))
    ch = rep.check("swap_and_invert_q")
    _note(record_property, f"{ch.count} labels at q=0.7, max {float(ch.max_residual):.2e} (tol 1e-35)")
    assert ch.count == 100
    assert ch.max_residual < 1e-35


def test_criterion_5_orthogonality(record_property):
    rep = suite_orthogonality(VerifyConfig(q=Fraction(1, 2), digits=DIGITS, max_mu=10))
    a, b = rep.check("sum_over_mu1"), rep.check("sum_over_kappa")
    finding = rep.findings[0]
    _note(record_property, f"max {float(max(a.max_residual, b.max_residual)):.2e} over {a.count} (k1,k2,mu) "
                           f"(tol 1e-30); {finding}")
    assert a.max_residual < 1e-30 and b.max_residual < 1e-30
    assert "mu-kappa2-1 confirmed" in finding


@pytest.fixture(scope="module")
def qhahn_report():
    return suite_qhahn(VerifyConfig(q=Fraction(1, 2), digits=DIGITS, trials=100, seed=6))


def test_criterion_6_qhahn(record_property, qhahn_report):
    residuals = [ch for ch in qhahn_report.checks if ch.name.split("_")[0] in ("diffeq", "ttrr", "lowering", "raising")]
    orth = [ch for ch in qhahn_report.checks if ch.name.startswith("orthogonality")]
    rmax = max(ch.max_residual for ch in residuals)
    omax = max(ch.max_residual for ch in orth)
    _note(record_property, f"{len(residuals)} residual checks, max {float(rmax):.2e} (tol 1e-35); "
                           f"orthogonality max {float(omax):.2e} (tol 1e-30)")
    assert len(residuals) == 8 and len(orth) == 2
    assert rmax < 1e-35
    assert omax < 1e-30


def test_criterion_7_connections(record_property):
    c = QContext(Fraction(1, 2), DIGITS)
    rng = random.Random(7)
    worst = {}
    for which in CONNECTIONS:
        pos = which.startswith("pos")
        worst[which] = 0
        for _ in range(100):
            L = random_pos_label(rng) if pos else random_mixed_label(rng)
            ref = cg_pos(L, CGMethod.HYP_A, c) if pos else cg_mixed(L, CGMethod.HYP_A, c)
            worst[which] = max(worst[which], _rel(cg_from_polynomials(which, L, c), ref))
    parts = ", ".join(f"{k} {float(v):.1e}" for k, v in worst.items())
    _note(record_property, f"{parts} (tol 1e-30); dual sign {POS_DUAL_SIGN}")
    assert POS_DUAL_SIGN == GOLDEN["pos_dual_sign"]
    assert max(worst.values()) < 1e-30


def test_criterion_8_recurrences(record_property):
    rep = suite_recurrences(VerifyConfig(q=Fraction(1, 2), digits=DIGITS, trials=100, seed=8))
    failing = [ch.name for ch in rep.checks if not ch.passed]
    parts = ", ".join(f"{ch.name} {float(ch.max_residual):.2e}" for ch in rep.checks)
    _note(record_property, f"{parts} (tol 1e-25); failing displays: {', '.join(failing) or 'none'}")
    for f in rep.findings:
        print(f)
    assert [ch.count for ch in rep.checks] == [100, 100, 100]
    assert not failing, "; ".join(rep.findings)


CLI_RUNS = [
    ["cg", "pos", "--k1", "1/2", "--k2", "1", "--mu", "9/2", "--format", "json"],
    ["cg", "mixed", "--k", "3/2", "--j", "1", "--mu", "7/2", "--q", "0.3", "--format", "csv", "--include-zeros"],
    ["cg", "pos", "--k1", "0", "--k2", "1/2", "--mu", "9/2", "--source", "oracle", "--method", "kernel"],
    ["qhahn", "dual", "--n", "2", "--a", "1", "--b", "8", "--c", "-1", "--format", "json"],
    ["verify", "symmetry", "--q", "0.7", "--trials", "20", "--seed", "1", "--format", "json"],
]


def test_criterion_9_determinism(record_property):
    same = 0
    for argv in CLI_RUNS:
        a, b = (subprocess.run([sys.executable, "-m", "suq11", *argv], capture_output=True) for _ in range(2))
        assert a.returncode == 0 and a.stdout
        same += a.stdout == b.stdout and a.returncode == b.returncode
    _note(record_property, f"{same}/{len(CLI_RUNS)} commands byte-identical across two runs")
    assert same == len(CLI_RUNS)

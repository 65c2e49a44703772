import csv
import io
import json
import subprocess
import sys

import mpmath
import pytest

from suq11.cli import RECORD_SCHEMA, parse_label, parse_q, run
from suq11.cli import UsageError


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def _validate(record):
    assert set(RECORD_SCHEMA["required"]) <= set(record)
    assert set(record) <= set(RECORD_SCHEMA["properties"])
    assert record["kind"] in RECORD_SCHEMA["properties"]["kind"]["enum"]
    assert record["provenance"] in RECORD_SCHEMA["properties"]["provenance"]["enum"]
    assert all(isinstance(v, int) for v in record["labels"].values())
    assert isinstance(record["value"], str) and isinstance(record["digits"], int)
    mpmath.mpf(record["value"])


class TestParsing:
    @pytest.mark.parametrize("text,twice", [("3", 6), ("3/2", 3), ("-1/2", -1), ("0", 0)])
    def test_labels(self, text, twice):
        assert parse_label(text, "x").twice == twice

    @pytest.mark.parametrize("text", ["1.5", "1/3", "abc", ""])
    def test_bad_labels(self, text):
        with pytest.raises(UsageError):
            parse_label(text, "x")

    def test_q(self):
        assert str(parse_q("0.5")) == "1/2"
        assert str(parse_q("7/10")) == "7/10"
        assert str(parse_q("2")) == "2"
        for bad in ("1", "0", "-0.5", "x"):
            with pytest.raises(UsageError):
                parse_q(bad)


class TestCg:
    def test_two_positive_couplings(self):
        code, out, _ = call("cg", "pos", "--k1", "0", "--k2", "0", "--k", "1", "--mu", "3", "--q", "0.5",
                            "--format", "json")
        assert code == 0
        recs = [json.loads(line) for line in out.splitlines()]
        assert [r["labels"]["mu1"] for r in recs] == [2, 4]
        for r in recs:
            _validate(r)
        total = sum(mpmath.mpf(r["value"]) ** 2 for r in recs)
        assert abs(total - 1) < mpmath.mpf(10) ** -45

    def test_mixed_range(self):
        code, out, _ = call("cg", "mixed", "--k", "1", "--j", "1", "--q", "0.5", "--mu", "2", "--m", "-1",
                            "--format", "json")
        assert code == 0
        kps = [json.loads(line)["labels"]["kappa_p"] for line in out.splitlines()]
        assert kps == [0]  # mu' = 1 leaves only kappa' = 0

    def test_include_zeros_adds_notes(self):
        _, out, _ = call("cg", "mixed", "--k", "1", "--j", "1", "--mu", "2", "--m", "-1", "--include-zeros",
                         "--format", "json")
        recs = [json.loads(line) for line in out.splitlines()]
        zeros = [r for r in recs if "note" in r]
        assert zeros and all(mpmath.mpf(r["value"]) == 0 for r in zeros)
        assert len(recs) > len(zeros)

    @pytest.mark.parametrize("source,method", [("closed_form", "hyp_c"), ("oracle", "projection"),
                                               ("oracle", "kernel"), ("polynomial", "hahn"),
                                               ("polynomial", "dual")])
    def test_sources_agree(self, source, method):
        base = call("cg", "pos", "--k1", "1/2", "--k2", "1", "--mu", "9/2", "--format", "json")[1]
        other = call("cg", "pos", "--k1", "1/2", "--k2", "1", "--mu", "9/2", "--format", "json",
                     "--source", source, "--method", method)[1]
        a = [mpmath.mpf(json.loads(x)["value"]) for x in base.splitlines()]
        b = [mpmath.mpf(json.loads(x)["value"]) for x in other.splitlines()]
        assert len(a) == len(b) > 3
        assert max(abs(x - y) for x, y in zip(a, b)) < mpmath.mpf(10) ** -40

    def test_csv(self):
        _, out, _ = call("cg", "pos", "--k1", "0", "--k2", "0", "--k", "1", "--mu", "3", "--format", "csv")
        assert "\r" not in out and out.endswith("\n")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 2
        assert {"kind", "method", "q", "digits", "value", "provenance"} <= set(rows[0])

    def test_text(self):
        _, out, _ = call("cg", "pos", "--k1", "0", "--k2", "0", "--k", "1", "--mu", "3")
        assert out.splitlines()[0].startswith("<0 1, 0 2 | 1 3> = 0.9701425001")

    def test_empty_range(self):
        code, out, _ = call("cg", "pos", "--k1", "1", "--k2", "0", "--k", "0", "--mu", "3")
        assert code == 0 and out == ""


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ("cg", "pos", "--k1", "1.5", "--k2", "0", "--mu", "3"),
        ("cg", "pos", "--k2", "0", "--mu", "3"),
        ("cg", "pos", "--k1", "0", "--k2", "0", "--mu", "3", "--source", "oracle", "--method", "hyp_a"),
        ("verify", "nope"),
        ("cg", "pos", "--k1", "0", "--k2", "0", "--mu", "3", "--q", "1"),
    ])
    def test_usage(self, argv):
        code, out, err = call(*argv)
        assert code == 1 and out == "" and err.startswith("usage error")

    @pytest.mark.parametrize("argv,needle", [
        (("cg", "pos", "--k1", "0", "--k2", "0", "--mu", "3", "--mu1", "0"), "mu1"),
        (("cg", "mixed", "--k", "1", "--mu", "1", "--j", "1"), "mu=1"),
        (("cg", "pos", "--k1", "-1", "--k2", "0", "--mu", "3"), "kappa1"),
    ])
    def test_domain(self, argv, needle):
        code, _, err = call(*argv)
        assert code == 2 and needle in err

    def test_verify_pass_and_fail(self):
        code, out, _ = call("verify", "symmetry", "--q", "0.7", "--trials", "50", "--seed", "1")
        assert code == 0 and "1/1 checks passed" in out and "n=50" in out
        code, out, _ = call("verify", "recurrences", "--trials", "10")
        assert code == 3 and "FAIL" in out


class TestQhahn:
    def test_rows_and_flag(self):
        code, out, _ = call("qhahn", "hahn", "--n", "1", "--N", "6", "--alpha", "1", "--beta", "-2",
                            "--format", "csv", "--s-min", "1", "--s-max", "4")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 4 and {r["orthogonal"] for r in rows} == {"false"}

    def test_degree_zero(self):
        _, out, _ = call("qhahn", "dual", "--n", "0", "--a", "1", "--b", "6", "--c", "0", "--format", "json")
        recs = [json.loads(line) for line in out.splitlines()]
        assert len(recs) == 5
        assert all(mpmath.mpf(r["value"]) == 1 for r in recs)
        assert all(r["rho"] and r["d2"] for r in recs)


def test_deterministic_across_processes():
    argv = [sys.executable, "-m", "suq11", "cg", "mixed", "--k", "3/2", "--j", "1", "--mu", "7/2",
            "--q", "0.3", "--format", "json", "--include-zeros"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a

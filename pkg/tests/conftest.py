from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from suq11.qcore import QContext

settings.register_profile(
    "suq11", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("suq11")


@pytest.fixture
def ctx():
    return QContext(Fraction(1, 2), 50)


@pytest.fixture(params=[Fraction(3, 10), Fraction(1, 2), Fraction(9, 10), Fraction(7, 5)], ids=str)
def any_q_ctx(request):
    return QContext(request.param, 50)


# One summary line per acceptance criterion, taken from the test outcome and
# the "detail" property each acceptance test records.
_CRITERIA: dict = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        detail = dict(report.user_properties).get("detail", "")
        _CRITERIA[int(name.split("_")[2])] = ("PASS" if report.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        verdict, detail = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {verdict}  {detail}")

import re

import pytest

_AC_NAME = re.compile(r"test_ac(\d\d)_(\w+)")
_outcomes: dict[str, str] = {}
_details: dict[str, str] = {}


@pytest.fixture
def ac_detail(request):
    """Record a one-line measurement shown next to the criterion verdict."""
    def record(text):
        _details[request.node.name] = text
    return record


def pytest_runtest_logreport(report):
    name = report.nodeid.split("::")[-1]
    if not _AC_NAME.fullmatch(name):
        return
    if report.failed:
        _outcomes[name] = "FAIL"
    elif report.when == "call":
        _outcomes.setdefault(name, "SKIP" if report.skipped else "PASS")
    elif report.skipped:
        _outcomes.setdefault(name, "SKIP")


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_outcomes):
        m = _AC_NAME.fullmatch(name)
        line = f"{_outcomes[name]:4}  AC{int(m.group(1))} {m.group(2).replace('_', ' ')}"
        if name in _details:
            line += f"  [{_details[name]}]"
        terminalreporter.write_line(line)

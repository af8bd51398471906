import re

import pytest

_ACCEPTANCE: dict[str, str] = {}
_CRITERION = re.compile(r"test_criterion_(\d+[a-z]?)")


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    m = _CRITERION.search(report.nodeid)
    if m is None:
        return
    key = m.group(1).lstrip("0")
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        prev = _ACCEPTANCE.get(key, "PASS")
        _ACCEPTANCE[key] = "PASS" if report.passed and prev == "PASS" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")

    def order(k):
        m = re.match(r"(\d+)([a-z]?)", k)
        return int(m.group(1)), m.group(2)

    for key in sorted(_ACCEPTANCE, key=order):
        terminalreporter.write_line(f"criterion {key:>4}: {_ACCEPTANCE[key]}")


@pytest.fixture(scope="session")
def small_moduli():
    from charseq.numtheory import admissible_moduli

    return list(admissible_moduli(1155))

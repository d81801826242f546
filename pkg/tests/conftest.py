import pytest

from magnihom.metric import random_metric


def corpus_spaces():
    """30 seeded spaces with 4 to 6 points; every fifth has half-integer distances."""
    return [random_metric(4 + i % 3, 1000 + i, denominator=2 if i % 5 == 4 else 1)
            for i in range(30)]


def seven_point_spaces():
    return [random_metric(7, 2000 + i) for i in range(20)]


@pytest.fixture(scope="session")
def corpus():
    return corpus_spaces()


# -- one pass/fail line per acceptance criterion -----------------------------

_criteria: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _criteria.items():
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")

import pytest

from revsym.rules import default_ruleset
from revsym.semantics import builtin_signature

_CRITERIA = {}


@pytest.fixture(scope="session")
def sig():
    return builtin_signature()


@pytest.fixture(scope="session")
def defaults():
    return default_ruleset()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, description = marker.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _CRITERIA[number] = (description, rep.passed, rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        description, passed, duration = _CRITERIA[number]
        mark = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{mark}] criterion {number}: {description} ({duration:.2f}s)")

"""Shared pytest wiring: the acceptance gates in test_acceptance.py are marked
with @pytest.mark.criterion(number, description), and this plugin prints one
visible [PASS]/[FAIL] line per gate after the run."""

import pytest

_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "criterion(number, description): acceptance gate reported in the terminal summary",
    )


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker:
            number, description = marker.args
            _RESULTS.setdefault(number, (False, description))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and report.when == "call":
        number, description = marker.args
        _RESULTS[number] = (report.passed, description)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        passed, description = _RESULTS[number]
        tag = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{tag}] criterion {number}: {description}")

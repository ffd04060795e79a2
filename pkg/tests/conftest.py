"""Collects one pass/fail line per acceptance criterion for the terminal summary."""

import pytest
from hypothesis import settings

# fixed example generation so every run of the suite exercises the same cases
settings.register_profile("repro", derandomize=True, print_blob=True)
settings.load_profile("repro")

_LINES: dict[int, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when not in ("setup", "call"):
        return
    if report.when == "setup" and report.passed:
        return
    number, title = marker.args
    details = dict(item.user_properties).get("detail", "")
    status = "PASS" if report.passed else "FAIL"
    line = f"criterion {number} [{title}]: {status}"
    if details:
        line += f" | {details}"
    _LINES[number] = line
    if report.when == "call":
        print(f"\n{line}")


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_LINES):
        terminalreporter.write_line(_LINES[number])

import os
import sys

from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_criteria = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        notes = [f"{k}={v}" for k, v in report.user_properties]
        _criteria.append((report.nodeid.split("::")[-1], report.outcome, report.duration, notes))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, duration, notes in _criteria:
        line = f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}  ({duration:.1f}s)"
        terminalreporter.write_line("  ".join([line] + notes))

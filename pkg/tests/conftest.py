"""Shared fixtures and the acceptance summary hook."""

# one "<name>: PASS|FAIL ..." line per acceptance criterion, collected by
# tests/test_acceptance.py and printed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)

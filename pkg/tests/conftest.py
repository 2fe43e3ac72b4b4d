import pytest

_LINES = []


@pytest.fixture
def acceptance_report():
    """Record one pass/fail line for an acceptance criterion."""

    def record(label, ok, detail, seconds):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {label}: {detail} [{seconds:.2f} s]"
        _LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)

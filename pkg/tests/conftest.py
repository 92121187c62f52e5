from pathlib import Path

import pytest

CORPUS = Path(__file__).resolve().parents[1] / "corpus"


def pytest_configure(config):
    config._criteria_lines = []


@pytest.fixture
def criterion(request):
    """Record a pass/fail line for an acceptance criterion, then assert it."""
    lines = request.config._criteria_lines

    def report(number, ok, detail=""):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        lines.append(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "_criteria_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)

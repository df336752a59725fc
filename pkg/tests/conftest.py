import pytest

from blocktrans.catalog import builtin_group
from blocktrans.design import block_orbit

WREATH_BASE = (1, 2, 3, 4, 9, 10)


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)


@pytest.fixture
def report_criterion(request):
    """Record one pass/fail line for the terminal summary."""
    def record(number, ok, detail, seconds):
        status = "PASS" if ok else "FAIL"
        request.config._acceptance_lines.append(f"criterion {number}: {status} ({seconds:.2f} s) {detail}")
    return record


@pytest.fixture(scope="session")
def s8wrs2():
    return builtin_group("S8wrS2").group()


@pytest.fixture(scope="session")
def wreath_design(s8wrs2):
    return block_orbit(s8wrs2, WREATH_BASE)

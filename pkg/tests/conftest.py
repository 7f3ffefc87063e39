import numpy as np
import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20091005)


@pytest.fixture
def criterion():
    """``criterion(n, ok, detail)`` logs one PASS/FAIL line, then asserts."""

    def record(number, ok, detail):
        line = f"AC{number:<2} {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l[2:4])):
            terminalreporter.write_line(line)

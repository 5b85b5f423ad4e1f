import numpy as np
import pytest

BARKER13 = np.array([1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1], dtype=np.int8)

_acceptance_lines: list[str] = []


@pytest.fixture
def barker13():
    return BARKER13.copy()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def acceptance_report():
    """Record one PASS/FAIL line per acceptance criterion."""

    def report(number, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
        _acceptance_lines.append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


def random_pm1(rng, length):
    return (2 * rng.integers(0, 2, size=length) - 1).astype(np.int8)

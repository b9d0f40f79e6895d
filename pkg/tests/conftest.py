import math
import sys

import pytest

from rnl_lab.quantum import AnalyzerSettings, bell_state


def angle_grid(n=64):
    """n x n points covering [0, pi)^2."""
    step = math.pi / n
    return [AnalyzerSettings(i * step, k * step) for i in range(n) for k in range(n)]


@pytest.fixture(scope="session")
def grid64():
    return angle_grid(64)


@pytest.fixture
def bell():
    return bell_state()


def deg(a, b):
    return AnalyzerSettings.from_degrees(a, b)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(results, key=lambda r: r[0]):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] C{number:02d} {title}: {detail}")

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from rhombus_billiards import make_triangle  # noqa: E402


@pytest.fixture(scope="session")
def cfg07():
    return make_triangle("0.7")


@pytest.fixture(scope="session")
def cfg_pi5():
    return make_triangle("pi/5")


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")

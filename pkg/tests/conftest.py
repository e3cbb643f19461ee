import math

import numpy as np
import pytest

from su2search.matching import MatchingInputs

ACCEPTANCE = []


def record(name, passed, detail):
    ACCEPTANCE.append((name, bool(passed), detail))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def grover4():
    return MatchingInputs.from_angles(math.pi / 6, math.pi / 6)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")

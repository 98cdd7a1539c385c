import random

import pytest
from hypothesis import HealthCheck, settings

from qsi.fixtures import A3, K2, L1

settings.register_profile("qsi", deadline=None, derandomize=True, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qsi")

# filled by tests/test_acceptance.py, printed once at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])


@pytest.fixture
def k2():
    return K2


@pytest.fixture
def l1():
    return L1


@pytest.fixture
def a3():
    return A3


@pytest.fixture
def rng():
    return random.Random(20240611)

import numpy as np
import pytest

from acmc.structure import random_structure

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=[1, 2, 3])
def n(request):
    return request.param


@pytest.fixture
def structure(n):
    return random_structure(n, 1000 + n)

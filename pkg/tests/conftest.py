import numpy as np
import pytest

from polyfock import Signal


@pytest.fixture
def like():
    return Signal(np.zeros(1024), -8.0, 8.0)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

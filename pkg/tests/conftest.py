import numpy as np
import pytest

from drsub.objectives import Quadratic, Softmax

# quadratic from the double-greedy worked example
QP_H = [[-1.0, -1.0], [-1.0, -2.0]]
QP_h = [0.5, 1.0]
SOFTMAX_L = [[2.25, 3.0], [3.0, 4.25]]


@pytest.fixture
def qp():
    return Quadratic(QP_H, QP_h)


@pytest.fixture
def softmax():
    return Softmax(SOFTMAX_L)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {title} -- {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])

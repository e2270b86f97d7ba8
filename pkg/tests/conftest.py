import numpy as np
import pytest

from qgeom.sampling import random_state, random_traceless_hermitian

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def herm(n, rng):
    return random_traceless_hermitian(n, rng)


def state(n, rng, rank=None):
    return random_state(n, rng, rank)


ACCEPTANCE_LINES = []


def record_criterion(number: int, title: str, passed: bool, detail: str = "") -> None:
    status = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES.append((number, f"{status} criterion {number:>2}: {title}" + (f" [{detail}]" if detail else "")))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

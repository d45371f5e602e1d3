import numpy as np
import pytest

from _shared import P6, SQ4, SQ5, TRI3


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def sq4():
    return list(SQ4)


@pytest.fixture
def sq5():
    return list(SQ5)


@pytest.fixture
def tri3():
    return list(TRI3)


@pytest.fixture
def p6():
    return list(P6)


def pytest_terminal_summary(terminalreporter):
    from _shared import ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        status, title, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number} [{status}] {title}: {detail}")

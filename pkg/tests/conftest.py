import pytest

from np_gadget.fixtures import B, B_WITNESS, SINGLE, U3

# (criterion, passed, detail) rows collected by test_acceptance.py
ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_LINES:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


@pytest.fixture
def b():
    return B


@pytest.fixture
def b_witness():
    return B_WITNESS


@pytest.fixture
def u3():
    return U3


@pytest.fixture
def single():
    return SINGLE

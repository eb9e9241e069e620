from fractions import Fraction

import pytest

from ldp_polytope.core import RMatrix


def example_3x3() -> RMatrix:
    """eps = ln 2 example with a single loose entry at (2, 1)."""
    return RMatrix.from_rows([[4, 1, 2], [3, 2, 2], [2, 1, 4]]).scale(Fraction(1, 7))


def example_two_column(t) -> RMatrix:
    """n = 4 extreme point supported on columns 1 and 3."""
    t = Fraction(t)
    return RMatrix.from_rows(
        [[1, 0, t, 0], [1, 0, t, 0], [t, 0, 1, 0], [1, 0, t, 0]]
    ).scale(1 / (1 + t))


def example_5x5(t) -> RMatrix:
    """n = 5 extreme point with one loose entry, outside both families."""
    t = Fraction(t)
    return RMatrix.from_rows([
        [1, 1, 2 * t, 1, 0],
        [t, 1, 2, t, 0],
        [t, t, 2, 1, 0],
        [1, t, 2, t, 0],
        [1, 1, 1 + t, t, 0],
    ]).scale(1 / (3 + 2 * t))


@pytest.fixture
def ex3():
    return example_3x3()


@pytest.fixture
def ex4():
    return example_two_column(2)


@pytest.fixture
def ex5():
    return example_5x5(2)


# -- acceptance reporting ----------------------------------------------------

_ACCEPTANCE: list[tuple[str, bool, str]] = []


def record_acceptance(label: str, passed: bool, detail: str) -> None:
    _ACCEPTANCE.append((label, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}  {detail}")

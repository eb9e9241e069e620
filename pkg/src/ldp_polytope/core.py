"""Exact rational scalars and dense rational linear algebra.

Every number in the package is a :class:`fractions.Fraction`.  Matrices are
small (n <= 6 in practice, so at most a few hundred rows over <= 36 columns),
which makes plain Python integers the fastest exact route: rows are scaled to
integers, eliminated, and divided by their content after every update.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, NamedTuple, Sequence

Rational = Fraction


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a Fraction.

    Decimal and exponent notation are rejected so that no value can silently
    come from a float.
    """
    if not isinstance(text, str):
        raise ValueError(f"expected a rational string, got {text!r}")
    s = text.strip()
    num, sep, den = s.partition("/")
    if not _is_int_literal(num) or (sep and not _is_int_literal(den, signed=False)):
        raise ValueError(f"malformed rational {text!r}")
    if sep and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if sep else 1)


def _is_int_literal(s: str, signed: bool = True) -> bool:
    if signed and s[:1] in "+-":
        s = s[1:]
    return s.isdigit() and s.isascii()


def format_rational(x: Fraction) -> str:
    """Canonical serialization: ``"p/q"`` in lowest terms, ``"p"`` when q = 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RMatrix:
    """Immutable dense matrix of Fractions stored row-major."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "RMatrix":
        data = [[Fraction(x) for x in row] for row in rows]
        ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged rows")
        return cls(len(data), ncols, tuple(x for r in data for x in r))

    @classmethod
    def identity(cls, n: int) -> "RMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def constant(cls, rows: int, cols: int, value) -> "RMatrix":
        return cls(rows, cols, (Fraction(value),) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return self.entries[j::self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "RMatrix":
        return RMatrix.from_rows(self.col(j) for j in range(self.cols))

    def scale(self, c) -> "RMatrix":
        c = Fraction(c)
        return RMatrix(self.rows, self.cols, tuple(c * x for x in self.entries))

    def __add__(self, other: "RMatrix") -> "RMatrix":
        self._check_same_shape(other)
        return RMatrix(self.rows, self.cols,
                       tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RMatrix") -> "RMatrix":
        self._check_same_shape(other)
        return RMatrix(self.rows, self.cols,
                       tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __matmul__(self, other: "RMatrix") -> "RMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = [other.col(j) for j in range(other.cols)]
        return RMatrix.from_rows(
            [sum((a * b for a, b in zip(self.row(i), c)), Fraction(0)) for c in ocols]
            for i in range(self.rows)
        )

    def matvec(self, x: Sequence) -> tuple[Fraction, ...]:
        if len(x) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum((a * b for a, b in zip(self.row(i), x)), Fraction(0))
                     for i in range(self.rows))

    def frobenius(self, other: "RMatrix") -> Fraction:
        """Trace inner product <self, other> = sum of entrywise products."""
        self._check_same_shape(other)
        return sum((a * b for a, b in zip(self.entries, other.entries)), Fraction(0))

    def permute(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "RMatrix":
        """Return B with B[i, j] = self[row_perm[i], col_perm[j]]."""
        return RMatrix.from_rows(
            [self[r, c] for c in col_perm] for r in row_perm
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def _check_same_shape(self, other: "RMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __str__(self) -> str:
        return "[" + ", ".join(
            "[" + ", ".join(format_rational(x) for x in self.row(i)) + "]"
            for i in range(self.rows)
        ) + "]"


def diag(values: Sequence) -> RMatrix:
    n = len(values)
    return RMatrix.from_rows(
        [values[i] if i == j else 0 for j in range(n)] for i in range(n)
    )


# ---------------------------------------------------------------------------
# Elimination on integer rows


def _integer_row(row: Sequence) -> list[int]:
    """Scale a rational row by the lcm of its denominators and clear content."""
    fr = [Fraction(x) for x in row]
    den = reduce(lcm, (x.denominator for x in fr), 1)
    ints = [x.numerator * (den // x.denominator) for x in fr]
    return _primitive(ints)


def _primitive(v: list[int]) -> list[int]:
    g = reduce(gcd, v, 0)
    if g > 1:
        return [x // g for x in v]
    return v


def _reduce_against(v: list[int], basis: dict[int, list[int]]) -> list[int]:
    """Eliminate the pivot columns of a fully reduced ``basis`` from ``v``."""
    for p, b in basis.items():
        if v[p]:
            a, c = b[p], v[p]
            v = _primitive([a * x - c * y for x, y in zip(v, b)])
    return v


def rank_of_rows(rows: Iterable[Sequence]) -> int:
    """Rank of the matrix whose rows are ``rows``.

    Rows are processed in order; each one is reduced against the pivots found
    so far and, if nonzero, contributes a pivot at its first nonzero column.
    Stops early once the rank equals the row width.
    """
    basis: dict[int, list[int]] = {}
    width = None
    for row in rows:
        v = _integer_row(row)
        if width is None:
            width = len(v)
        elif len(v) != width:
            raise ValueError("rows of unequal length")
        v = _reduce_against(v, basis)
        p = next((k for k, x in enumerate(v) if x), None)
        if p is None:
            continue
        # keep the stored basis reduced below the new pivot as well
        for q, b in list(basis.items()):
            if b[p]:
                a, c = v[p], b[p]
                basis[q] = _primitive([a * x - c * y for x, y in zip(b, v)])
        basis[p] = v
        if len(basis) == width:
            break
    return len(basis)


def mat_rank(m: RMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return rank_of_rows(m.row(i) for i in range(m.rows))


class SolveStatus(enum.Enum):
    UNIQUE = "unique"
    INCONSISTENT = "inconsistent"
    UNDERDETERMINED = "underdetermined"


class LinearSolution(NamedTuple):
    status: SolveStatus
    x: tuple[Fraction, ...] | None = None


def solve_linear(m: RMatrix, b: Sequence) -> LinearSolution:
    """Solve ``m @ x = b`` exactly.

    Returns status UNIQUE with the solution, INCONSISTENT when there is none,
    or UNDERDETERMINED when solutions exist but are not unique.
    """
    if m.rows != len(b):
        raise ValueError(f"{m.rows} equations but {len(b)} right-hand sides")
    ncols = m.cols
    basis: dict[int, list[int]] = {}
    for i in range(m.rows):
        v = _integer_row(list(m.row(i)) + [b[i]])
        v = _reduce_against(v, basis)
        p = next((k for k, x in enumerate(v) if x), None)
        if p is None:
            continue
        if p == ncols:
            return LinearSolution(SolveStatus.INCONSISTENT)
        for q, row in list(basis.items()):
            if row[p]:
                a, c = v[p], row[p]
                basis[q] = _primitive([a * x - c * y for x, y in zip(row, v)])
        basis[p] = v
    if len(basis) < ncols:
        return LinearSolution(SolveStatus.UNDERDETERMINED)
    # basis is fully reduced: row p has nonzeros only at p and the rhs
    x = tuple(Fraction(basis[p][ncols], basis[p][p]) for p in range(ncols))
    return LinearSolution(SolveStatus.UNIQUE, x)

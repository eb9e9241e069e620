"""The local differential-privacy polytope and its indexed constraint system.

A mechanism is an n x n row-stochastic matrix A with ``A[i, j]`` the
probability of reporting j on input i.  It is t-private (t = e^eps) when every
column satisfies ``A[i, j] <= t * A[k, j]`` for all rows i, k.

Constraint index order, fixed for a given (n, t):

* ``0 .. n-1``: row sums, ``Stochastic(i)``;
* ``n .. n + n^2 - 1``: ``NonNeg(i, j)`` in row-major order;
* the rest: ``DP(i, k, j)`` for i != k, sorted by (j, i, k), i.e. grouped by
  column.

All indices here are 0-based; serialized labels add 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .core import RMatrix, format_rational

STOCHASTIC = "Stochastic"
NONNEG = "NonNeg"
DP = "DP"

EQUAL = "=="
LESS_EQ = "<="


class NotInPolytopeError(ValueError):
    """Raised when an operation requires a member of the polytope."""


@dataclass(frozen=True)
class PrivacyParameter:
    """t = e^eps as an exact rational; t = 1 means eps = 0."""

    t: Fraction

    def __post_init__(self):
        t = Fraction(self.t)
        if t < 1:
            raise ValueError(f"privacy parameter t = e^eps must be >= 1, got {t}")
        object.__setattr__(self, "t", t)

    @classmethod
    def from_ln2_multiple(cls, k: int) -> "PrivacyParameter":
        """eps = k * ln 2, so t = 2**k."""
        if k < 0:
            raise ValueError("eps must be nonnegative")
        return cls(Fraction(2) ** k)

    def __str__(self) -> str:
        return format_rational(self.t)


def as_privacy(t) -> PrivacyParameter:
    return t if isinstance(t, PrivacyParameter) else PrivacyParameter(Fraction(t))


@dataclass(frozen=True)
class Constraint:
    kind: str
    # (i,) for Stochastic, (i, j) for NonNeg, (i, k, j) for DP; all 0-based
    where: tuple[int, ...]
    coeffs: tuple[tuple[tuple[int, int], Fraction], ...]
    rhs: Fraction
    relation: str

    def lhs(self, a: RMatrix) -> Fraction:
        return sum((c * a[pos] for pos, c in self.coeffs), Fraction(0))

    def holds(self, a: RMatrix) -> bool:
        v = self.lhs(a)
        return v == self.rhs if self.relation == EQUAL else v <= self.rhs

    def is_tight(self, a: RMatrix) -> bool:
        return self.lhs(a) == self.rhs

    def vector(self, n: int) -> list[Fraction]:
        """Dense coefficient vector over the n^2 entries, row-major."""
        v = [Fraction(0)] * (n * n)
        for (r, c), x in self.coeffs:
            v[r * n + c] += x
        return v

    @property
    def label(self) -> str:
        return f"{self.kind}({','.join(str(i + 1) for i in self.where)})"


@dataclass(frozen=True)
class ConstraintSystem:
    n: int
    t: PrivacyParameter
    constraints: tuple[Constraint, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.constraints)

    def __getitem__(self, idx: int) -> Constraint:
        return self.constraints[idx]

    @property
    def stochastic_indices(self) -> range:
        return range(0, self.n)

    @property
    def nonneg_indices(self) -> range:
        return range(self.n, self.n + self.n * self.n)

    @property
    def dp_indices(self) -> range:
        return range(self.n + self.n * self.n, len(self.constraints))

    def nonneg_index(self, i: int, j: int) -> int:
        return self.n + i * self.n + j

    def dp_index(self, i: int, k: int, j: int) -> int:
        if i == k:
            raise ValueError("DP constraints with i == k are not part of the system")
        n = self.n
        return n + n * n + j * n * (n - 1) + i * (n - 1) + (k if k < i else k - 1)

    def dp_column_indices(self, j: int) -> range:
        n = self.n
        start = n + n * n + j * n * (n - 1)
        return range(start, start + n * (n - 1))


@lru_cache(maxsize=64)
def _build(n: int, t: Fraction) -> ConstraintSystem:
    one = Fraction(1)
    cons: list[Constraint] = []
    for i in range(n):
        cons.append(Constraint(STOCHASTIC, (i,), tuple(((i, j), one) for j in range(n)),
                               one, EQUAL))
    for i in range(n):
        for j in range(n):
            cons.append(Constraint(NONNEG, (i, j), (((i, j), -one),), Fraction(0), LESS_EQ))
    for j in range(n):
        for i in range(n):
            for k in range(n):
                if i != k:
                    cons.append(Constraint(DP, (i, k, j), (((i, j), one), ((k, j), -t)),
                                           Fraction(0), LESS_EQ))
    return ConstraintSystem(n, PrivacyParameter(t), tuple(cons))


def build_system(n: int, t) -> ConstraintSystem:
    """Constraint system of the polytope for size n and parameter t."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _build(n, as_privacy(t).t)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a membership test; ``violations`` empty means A is in D."""

    violations: tuple[int, ...] = ()

    @property
    def in_polytope(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.in_polytope


def _check_square(a: RMatrix, n: int | None = None) -> None:
    if not a.is_square:
        raise ValueError(f"mechanism must be square, got {a.rows}x{a.cols}")
    if n is not None and a.rows != n:
        raise ValueError(f"expected a {n}x{n} matrix, got {a.rows}x{a.cols}")


def membership(a: RMatrix, t) -> Verdict:
    """Check every constraint exactly and list the violated indices."""
    _check_square(a)
    sys = t if isinstance(t, ConstraintSystem) else build_system(a.rows, t)
    _check_square(a, sys.n)
    return Verdict(tuple(idx for idx, c in enumerate(sys.constraints) if not c.holds(a)))


def is_member(a: RMatrix, t) -> bool:
    return membership(a, t).in_polytope


def require_member(a: RMatrix, sys: ConstraintSystem) -> None:
    verdict = membership(a, sys)
    if not verdict:
        labels = ", ".join(sys[i].label for i in verdict.violations[:5])
        raise NotInPolytopeError(f"matrix is not in the polytope (violates {labels}...)")


def tight_set(a: RMatrix, sys: ConstraintSystem) -> frozenset[int]:
    """Indices of constraints holding with equality at ``a``."""
    require_member(a, sys)
    return frozenset(idx for idx, c in enumerate(sys.constraints) if c.is_tight(a))


def pairwise_private(v: Sequence, t) -> bool:
    t = as_privacy(t).t
    return all(x <= t * y for x in v for y in v)


def nonneg_redundancy_check(v: Sequence, t) -> bool:
    """True iff (v_i <= t v_j for all i, j) implies v >= 0.

    Only meaningful for t > 1; at t = 1 negative constant vectors are
    counterexamples, so the check is refused.
    """
    t = as_privacy(t).t
    if t == 1:
        raise ValueError("nonnegativity is not implied by the privacy constraints at t = 1")
    v = [Fraction(x) for x in v]
    if not pairwise_private(v, t):
        return True
    return all(x >= 0 for x in v)

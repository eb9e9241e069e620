"""Generators for the characterized extreme-point families, a brute-force
vertex oracle, and canonical forms under row/column permutation."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .analysis import DPRIME, DTILDE, loose_entries, support
from .core import RMatrix, SolveStatus, mat_rank, solve_linear
from .polytope import ConstraintSystem, as_privacy, build_system, membership

GENERATOR = "Generator"
ORACLE = "Oracle"
NEITHER = "Neither"

ORACLE_MAX_N = 3
CANONICAL_MAX_N = 5

LO, HI = 0, 1


class BudgetExhausted(RuntimeError):
    """The oracle hit its candidate budget before finishing."""

    def __init__(self, examined: int, total: int):
        super().__init__(
            f"vertex oracle budget exhausted after {examined} of {total} candidate bases"
        )
        self.examined = examined
        self.total = total


@dataclass(frozen=True)
class Pattern:
    """LO/HI layout of a loose-free matrix on its support columns.

    ``cells[i][c]`` is LO (value 1) or HI (value t) for row i and the c-th
    support column.
    """

    n: int
    support: tuple[int, ...]
    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for c in range(len(self.support)):
            col = {row[c] for row in self.cells}
            if col != {LO, HI}:
                raise ValueError("every pattern column needs both a LO and a HI cell")

    def evaluate(self, t: Fraction) -> RMatrix:
        vals = (Fraction(1), Fraction(t))
        return RMatrix.from_rows([vals[x] for x in row] for row in self.cells)


@dataclass(frozen=True)
class VertexSet:
    n: int
    t: Fraction
    vertices: tuple[RMatrix, ...]
    provenance: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertices")
        if len(self.provenance) != len(self.vertices):
            raise ValueError("one provenance tag per vertex")

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def as_set(self) -> frozenset[RMatrix]:
        return frozenset(self.vertices)

    def union(self, other: "VertexSet") -> "VertexSet":
        seen = set(self.vertices)
        verts, prov = list(self.vertices), list(self.provenance)
        for v, p in zip(other.vertices, other.provenance):
            if v not in seen:
                seen.add(v)
                verts.append(v)
                prov.append(p)
        return VertexSet(self.n, self.t, tuple(verts), tuple(prov))

    def canonical(self) -> "VertexSet":
        """One representative (the canonical form) per permutation orbit."""
        seen: dict[RMatrix, str] = {}
        for v, p in zip(self.vertices, self.provenance):
            seen.setdefault(canonical_form(v), p)
        return VertexSet(self.n, self.t, tuple(seen), tuple(seen.values()))


@dataclass(frozen=True)
class PermutationPair:
    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]

    def __post_init__(self):
        for p in (self.row_perm, self.col_perm):
            if sorted(p) != list(range(len(p))):
                raise ValueError(f"{p} is not a permutation")

    def apply(self, a: RMatrix) -> RMatrix:
        """Return P1 A P2 as the matrix with entries a[row_perm[i], col_perm[j]]."""
        return a.permute(self.row_perm, self.col_perm)

    @classmethod
    def sample(cls, n: int, rng: random.Random) -> "PermutationPair":
        r, c = list(range(n)), list(range(n))
        rng.shuffle(r)
        rng.shuffle(c)
        return cls(tuple(r), tuple(c))


def corner_matrix(n: int, j: int) -> RMatrix:
    """E_j: every row puts all its mass on output j."""
    return RMatrix.from_rows([[int(c == j) for c in range(n)] for _ in range(n)])


def enumerate_corner_family(n: int) -> VertexSet:
    if n < 1:
        raise ValueError("n must be >= 1")
    verts = tuple(corner_matrix(n, j) for j in range(n))
    return VertexSet(n, Fraction(1), verts, (GENERATOR,) * n)


def iter_patterns(n: int, support_cols: Sequence[int]) -> Iterable[Pattern]:
    """Valid patterns on a support, in increasing row-major base-2 order."""
    s = len(support_cols)
    # columns as bitmasks over rows; every column must mix LO and HI
    full = (1 << n) - 1
    for code in range(1 << (n * s)):
        bits = [(code >> (n * s - 1 - p)) & 1 for p in range(n * s)]
        cells = tuple(tuple(bits[i * s:(i + 1) * s]) for i in range(n))
        ok = True
        for c in range(s):
            mask = sum(cells[i][c] << i for i in range(n))
            if mask == 0 or mask == full:
                ok = False
                break
        if ok:
            yield Pattern(n, tuple(support_cols), cells)


def pattern_matrix(p: Pattern, t: Fraction) -> RMatrix | None:
    """The loose-free matrix with pattern ``p``, or None if it does not exist."""
    pt = p.evaluate(t)
    s = len(p.support)
    if mat_rank(pt) != s:
        return None
    sol = solve_linear(pt, [1] * p.n)
    if sol.status is not SolveStatus.UNIQUE or any(m <= 0 for m in sol.x):
        return None
    rows = [[Fraction(0)] * p.n for _ in range(p.n)]
    for c, j in enumerate(p.support):
        for i in range(p.n):
            rows[i][j] = sol.x[c] * pt[i, c]
    return RMatrix.from_rows(rows)


def enumerate_tight_family(n: int, t, sizes: Iterable[int] | None = None) -> VertexSet:
    """Every loose-free matrix with rank equal to its support size >= 2.

    ``sizes`` restricts the support sizes visited (all of 2..n by default);
    a restricted run returns a subset of the family.
    """
    t = as_privacy(t).t
    if n < 1:
        raise ValueError("n must be >= 1")
    if t == 1:
        return VertexSet(n, t, (), ())
    sys = build_system(n, t)
    verts = []
    wanted = range(2, n + 1) if sizes is None else sorted(set(sizes) & set(range(2, n + 1)))
    for s in wanted:
        for cols in itertools.combinations(range(n), s):
            for p in iter_patterns(n, cols):
                a = pattern_matrix(p, t)
                if a is None:
                    continue
                _assert_tight_member(a, sys, s)
                verts.append(a)
    return VertexSet(n, t, tuple(verts), (GENERATOR,) * len(verts))


def _assert_tight_member(a: RMatrix, sys: ConstraintSystem, s: int) -> None:
    if not membership(a, sys):
        raise AssertionError(f"generated matrix {a} is not in the polytope")
    if loose_entries(a, sys.t):
        raise AssertionError(f"generated matrix {a} has loose entries")
    if not (mat_rank(a) == len(support(a)) == s):
        raise AssertionError(f"generated matrix {a} has wrong rank or support")


def generator_vertices(n: int, t) -> VertexSet:
    """Union of the corner family and the tight family."""
    t = as_privacy(t).t
    corners = enumerate_corner_family(n)
    corners = VertexSet(n, t, corners.vertices, corners.provenance)
    return corners.union(enumerate_tight_family(n, t))


def oracle_candidate_count(n: int) -> int:
    m = n * n * (n - 1)
    return comb(m, n * n - n)


def vertex_oracle(n: int, t, budget: int | None = None) -> VertexSet:
    """All vertices by brute force over square subsystems of tight constraints.

    For t > 1 the nonnegativity constraints are implied by the privacy ones, so
    only privacy constraints are combined with the n row-sum equalities.  Each
    candidate point is still checked against the full system.  ``budget`` caps
    the number of candidate subsets examined; it is required for n > 3.
    """
    t = as_privacy(t).t
    if n < 1:
        raise ValueError("n must be >= 1")
    if t == 1:
        corners = enumerate_corner_family(n)
        return VertexSet(n, t, corners.vertices, (ORACLE,) * n)
    if n > ORACLE_MAX_N and budget is None:
        raise ValueError(f"vertex oracle needs an explicit budget for n > {ORACLE_MAX_N}")
    sys = build_system(n, t)
    pool = list(sys.dp_indices)
    verts = basis_vertices(sys, pool, budget)
    return VertexSet(n, t, tuple(verts), (ORACLE,) * len(verts))


def basis_vertices(sys: ConstraintSystem, pool: Sequence[int],
                   budget: int | None = None) -> list[RMatrix]:
    """Basic feasible points from the row sums plus n^2 - n constraints of ``pool``."""
    n = sys.n
    k = n * n - n
    total = comb(len(pool), k)
    stoch = [sys[i].vector(n) for i in sys.stochastic_indices]
    vecs = {i: sys[i].vector(n) for i in pool}
    rhs_stoch = [sys[i].rhs for i in sys.stochastic_indices]
    seen: set[RMatrix] = set()
    out: list[RMatrix] = []
    for count, subset in enumerate(itertools.combinations(pool, k)):
        if budget is not None and count >= budget:
            raise BudgetExhausted(count, total)
        m = RMatrix.from_rows(stoch + [vecs[i] for i in subset])
        sol = solve_linear(m, rhs_stoch + [sys[i].rhs for i in subset])
        if sol.status is not SolveStatus.UNIQUE:
            continue
        a = RMatrix(n, n, sol.x)
        if a in seen or not membership(a, sys):
            continue
        seen.add(a)
        out.append(a)
    return out


def canonical_form(a: RMatrix) -> RMatrix:
    """Lexicographically smallest P1 A P2 over all permutation pairs.

    For a fixed column order the smallest row arrangement is the sorted one,
    so only the n! column orders need to be searched.
    """
    if not a.is_square:
        raise ValueError("canonical form needs a square matrix")
    n = a.rows
    if n > CANONICAL_MAX_N:
        raise ValueError(f"canonical form is limited to n <= {CANONICAL_MAX_N}")
    best = None
    for cols in itertools.permutations(range(n)):
        rows = sorted(tuple(a[i, c] for c in cols) for i in range(n))
        if best is None or rows < best:
            best = rows
    return RMatrix.from_rows(best)


def family_membership(a: RMatrix, t) -> str:
    """DPrime, DTilde or Neither, from support, loose entries and rank alone."""
    gamma = support(a)
    if len(gamma) == 1:
        return DPRIME
    if len(gamma) >= 2 and not loose_entries(a, as_privacy(t).t) and mat_rank(a) == len(gamma):
        return DTILDE
    return NEITHER

"""Structural property checks for extreme points and whole vertex sets.

Each check returns a list of failure messages; an empty list is a pass.
``run_suite`` aggregates them into named suites for the ``verify`` command.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .analysis import (DTILDE, column_tight_span_dim, is_extreme,
                       loose_entries, support, tilde_normalize)
from .core import RMatrix, mat_rank
from .enumeration import (NEITHER, ORACLE_MAX_N, PermutationPair, basis_vertices,
                          enumerate_corner_family, enumerate_tight_family,
                          family_membership, generator_vertices, vertex_oracle)
from .polytope import ConstraintSystem, build_system, membership

PointCheck = Callable[[RMatrix, ConstraintSystem], list]


def check_rank_equals_support(a, sys):
    g, r = len(support(a)), mat_rank(a)
    return [] if g == r else [f"rank {r} != |support| {g}"]


def check_loose_bound(a, sys):
    g, lam = len(support(a)), loose_entries(a, sys.t)
    if g >= 2 and len(lam) > sys.n - g:
        return [f"{len(lam)} loose entries exceed n - |support| = {sys.n - g}"]
    if g == 1 and sys.t.t > 1 and len(lam) != sys.n:
        return [f"single-column point has {len(lam)} loose entries, expected {sys.n}"]
    return []


def check_one_loose_per_row(a, sys):
    rows = [i for i, _ in loose_entries(a, sys.t)]
    dup = sorted({i for i in rows if rows.count(i) > 1})
    return [f"row {i + 1} has several loose entries" for i in dup]


def check_no_constant_support_column(a, sys):
    gamma = support(a)
    if len(gamma) < 2:
        return []
    return [f"support column {j + 1} is constant" for j in sorted(gamma)
            if len(set(a.col(j))) == 1]


def check_tilde_rows_nonconstant(a, sys):
    gamma = sorted(support(a))
    if len(gamma) < 2:
        return []
    tilde = tilde_normalize(a).tilde
    return [f"row {i + 1} of the tilde form is constant on the support"
            for i in range(sys.n) if len({tilde[i, j] for j in gamma}) == 1]


def check_column_tight_span(a, sys):
    # at t = 1 a zero column only reaches span n - 1 (all rows forced equal)
    if sys.t.t == 1:
        return []
    out = []
    gamma = support(a)
    for j in range(sys.n):
        d = column_tight_span_dim(a, sys, j)
        if j in gamma and d > sys.n - 1:
            out.append(f"nonzero column {j + 1} has tight span {d}")
        if j not in gamma and d != sys.n:
            out.append(f"zero column {j + 1} has tight span {d} != n")
    return out


def check_column_extremes(a, sys):
    """A tight privacy constraint pins the column max and min."""
    out = []
    for idx in sys.dp_indices:
        c = sys[idx]
        if c.is_tight(a):
            i, k, j = c.where
            col = a.col(j)
            if a[i, j] != max(col) or a[k, j] != min(col):
                out.append(f"tight {c.label} not at column max/min")
    return out


def check_two_column_form(a, sys):
    gamma = sorted(support(a))
    if len(gamma) != 2:
        return []
    t = sys.t.t
    tilde = tilde_normalize(a).tilde
    allowed = {(Fraction(1), t), (t, Fraction(1))}
    out = [f"row {i + 1} of the tilde form is not (1, t) or (t, 1)"
           for i in range(sys.n) if (tilde[i, gamma[0]], tilde[i, gamma[1]]) not in allowed]
    if loose_entries(a, t):
        out.append("two-column extreme point has loose entries")
    return out


def check_family(a, sys):
    """Loose-free or full-support extreme points must lie in the tight family."""
    gamma, lam = support(a), loose_entries(a, sys.t)
    fam = family_membership(a, sys.t)
    out = []
    if len(gamma) >= 2 and not lam and fam != DTILDE:
        out.append("loose-free extreme point outside the tight family")
    if len(gamma) == sys.n and sys.n >= 2 and fam != DTILDE:
        out.append("full-support extreme point outside the tight family")
    return out


def make_permutation_check(pairs: int, seed: int = 0) -> PointCheck:
    def check_permutations(a, sys):
        rng = random.Random(f"perm:{seed}:{a}")
        base = bool(is_extreme(a, sys))
        out = []
        for _ in range(pairs):
            pp = PermutationPair.sample(sys.n, rng)
            b = pp.apply(a)
            if not membership(b, sys):
                out.append(f"permutation {pp} leaves the polytope")
            elif bool(is_extreme(b, sys)) != base:
                out.append(f"permutation {pp} changes extremality")
        return out
    return check_permutations


POINT_CHECKS: dict[str, PointCheck] = {
    "rank_equals_support": check_rank_equals_support,
    "loose_entry_bound": check_loose_bound,
    "one_loose_per_row": check_one_loose_per_row,
    "no_constant_support_column": check_no_constant_support_column,
    "tilde_rows_nonconstant": check_tilde_rows_nonconstant,
    "column_tight_span": check_column_tight_span,
    "column_extremes": check_column_extremes,
    "two_column_form": check_two_column_form,
}


def check_extreme_point(a: RMatrix, sys: ConstraintSystem,
                        permutations: int = 0, seed: int = 0,
                        family: bool = False) -> list[str]:
    """Run every structural check that holds at an extreme point."""
    checks = dict(POINT_CHECKS)
    if family:
        checks["family_characterization"] = check_family
    if permutations:
        checks["permutation_invariance"] = make_permutation_check(permutations, seed)
    out = []
    if not is_extreme(a, sys):
        out.append("extremality: point is not extreme")
    for name, fn in checks.items():
        out.extend(f"{name}: {msg}" for msg in fn(a, sys))
    return out


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)  # (matrix, message)
    note: str = ""

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        d = {"suite": self.name, "passed": self.passed, "checked": self.checked}
        if self.failures:
            d["witness"] = self.failures[0][0]
            d["failures"] = [{"matrix": m, "message": msg} for m, msg in self.failures]
        if self.note:
            d["note"] = self.note
        return d


def _run_point_suite(name: str, fn: PointCheck, points: Iterable[RMatrix],
                     sys: ConstraintSystem) -> SuiteResult:
    res = SuiteResult(name)
    for a in points:
        res.checked += 1
        res.failures.extend((str(a), msg) for msg in fn(a, sys))
    return res


def midpoint(a: RMatrix, b: RMatrix) -> RMatrix:
    return (a + b).scale(Fraction(1, 2))


def run_suite(n: int, t, extra: Iterable[RMatrix] = (), permutations: int = 10,
              samples: int = 50, seed: int = 0) -> list[SuiteResult]:
    """Theorem suites for size n at parameter t.

    Generated vertices are enumerated for n <= 4; the brute-force oracle is
    compared against them for n <= 3.  ``extra`` matrices are analyzed on top,
    and any extreme one outside both families is reported as a witness that
    the families do not exhaust the vertices.
    """
    sys = build_system(n, t)
    tval = sys.t.t
    results: list[SuiteResult] = []
    points: list[RMatrix] = []

    if n <= 4:
        gen = generator_vertices(n, tval)
        points = list(gen.vertices)
        res = SuiteResult("generators_extreme", note=f"{len(points)} generated vertices")
        for a in points:
            res.checked += 1
            if not membership(a, sys):
                res.failures.append((str(a), "not in the polytope"))
            elif not is_extreme(a, sys):
                res.failures.append((str(a), "not extreme"))
        results.append(res)
    else:
        points = list(enumerate_corner_family(n).vertices)
        results.append(_run_point_suite(
            "generators_extreme",
            lambda a, s: [] if is_extreme(a, s) else ["not extreme"], points, sys))
        results[-1].note = "tight-family enumeration skipped for n > 4"

    if tval == 1:
        res = SuiteResult("eps_zero_corners_only")
        tight = enumerate_tight_family(n, tval)
        res.checked = len(points)
        if len(tight):
            res.failures.append((str(tight.vertices[0]), "tight family nonempty at t = 1"))
        if n <= 2:
            # no redundancy of nonnegativity at t = 1: include it in the pool
            brute = basis_vertices(sys, list(sys.nonneg_indices) + list(sys.dp_indices))
            if set(brute) != set(enumerate_corner_family(n).vertices):
                res.failures.append(("-", f"brute force found {len(brute)} vertices"))
            res.note = "confirmed by brute force over all inequality bases"
        else:
            res.note = "closed form; brute force limited to n <= 2"
        results.append(res)

    for name, fn in POINT_CHECKS.items():
        results.append(_run_point_suite(name, fn, points, sys))
    results.append(_run_point_suite("family_characterization", check_family, points, sys))
    results.append(_run_point_suite(
        "permutation_invariance", make_permutation_check(permutations, seed), points, sys))

    if tval > 1 and n <= ORACLE_MAX_N:
        oracle = vertex_oracle(n, tval)
        res = SuiteResult("oracle_equivalence", checked=len(oracle),
                          note=f"oracle found {len(oracle)} vertices")
        missing = oracle.as_set() - set(points)
        extra_gen = set(points) - oracle.as_set()
        res.failures.extend((str(a), "vertex missed by the generators") for a in missing)
        res.failures.extend((str(a), "generated point not found by oracle") for a in extra_gen)
        results.append(res)

    if len(points) >= 2 and samples:
        rng = random.Random(f"midpoints:{seed}")
        res = SuiteResult("midpoints_not_extreme")
        for _ in range(samples):
            a, b = rng.sample(points, 2)
            m = midpoint(a, b)
            res.checked += 1
            if is_extreme(m, sys):
                res.failures.append((str(m), "midpoint of two vertices certified extreme"))
        results.append(res)

    extra = list(extra)
    if extra:
        res = SuiteResult("supplied_matrices")
        witnesses = 0
        for a in extra:
            res.checked += 1
            if not membership(a, sys):
                res.failures.append((str(a), "supplied matrix not in the polytope"))
                continue
            if not is_extreme(a, sys):
                continue
            res.failures.extend((str(a), m) for m in check_extreme_point(a, sys))
            if family_membership(a, tval) == NEITHER:
                witnesses += 1
        res.note = (f"{witnesses} extreme point(s) outside both families: containment is strict"
                    if witnesses else "no extreme point outside both families supplied")
        results.append(res)
    return results

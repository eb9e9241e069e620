"""Linear utility maximization over the privacy polytope.

Two independent routes: scanning a vertex set, and an exact two-phase simplex
over the constraint system with Bland's rule.  ``conjecture_probe`` feeds
random integer utilities to the simplex and flags optima outside the known
families.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .analysis import is_extreme
from .core import RMatrix
from .enumeration import NEITHER, VertexSet, family_membership
from .polytope import (ConstraintSystem, as_privacy, build_system, membership,
                       tight_set)

VERTEX_SCAN = "VertexScan"
SIMPLEX = "Simplex"

PROBE_LOW, PROBE_HIGH = -9, 9


@dataclass(frozen=True)
class OptimizationResult:
    value: Fraction
    argmax: RMatrix
    method: str
    certificate: frozenset[int] = field(default_factory=frozenset)
    pivots: int = 0


def _utility_value(u: RMatrix, a: RMatrix) -> Fraction:
    return u.frobenius(a)


def optimize_over_vertices(u: RMatrix, vertices: VertexSet) -> OptimizationResult:
    """Exact maximum of <U, A> over the vertices; ties go to the first one."""
    if not len(vertices):
        raise ValueError("empty vertex set")
    best, best_val = None, None
    for v in vertices:
        val = _utility_value(u, v)
        if best_val is None or val > best_val:
            best, best_val = v, val
    sys = build_system(vertices.n, vertices.t)
    return OptimizationResult(best_val, best, VERTEX_SCAN, tight_set(best, sys))


class _Tableau:
    """Dense simplex tableau in equality form; rows[i][-1] is the rhs."""

    def __init__(self, rows: list[list[Fraction]], basis: list[int]):
        self.rows = rows
        self.basis = basis
        self.pivots = 0

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        p = row[c]
        if p != 1:
            row = [x / p for x in row]
            self.rows[r] = row
        nz = [k for k, x in enumerate(row) if x]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f:
                for k in nz:
                    other[k] -= f * row[k]
        self.basis[r] = c
        self.pivots += 1

    def reduced_costs(self, cost: list[Fraction], ncols: int) -> list[Fraction]:
        """c_j - c_B B^-1 a_j for every column (maximization form)."""
        red = list(cost[:ncols])
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[i]
                for k in range(ncols):
                    if row[k]:
                        red[k] -= cb * row[k]
        return red

    def run(self, cost: list[Fraction], allowed: int) -> None:
        """Maximize ``cost`` using columns < ``allowed`` with Bland's rule."""
        while True:
            red = self.reduced_costs(cost, allowed)
            enter = next((k for k in range(allowed) if red[k] > 0), None)
            if enter is None:
                return
            leave, best = None, None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    if (best is None or ratio < best
                            or (ratio == best and self.basis[i] < self.basis[leave])):
                        leave, best = i, ratio
            if leave is None:
                raise ArithmeticError("unbounded direction in a bounded polytope")
            self.pivot(leave, enter)


def simplex_optimize(u: RMatrix, sys: ConstraintSystem) -> OptimizationResult:
    """Exact two-phase simplex maximizing <U, A> over the polytope.

    Variables are the n^2 entries (nonnegative) followed by one slack per
    privacy constraint.  Phase one uses an artificial variable per row sum.
    """
    n = sys.n
    if u.shape != (n, n):
        raise ValueError(f"utility must be {n}x{n}")
    dp = list(sys.dp_indices)
    nx, ns = n * n, len(dp)
    nart = n
    width = nx + ns + nart
    zero, one = Fraction(0), Fraction(1)

    rows: list[list[Fraction]] = []
    basis: list[int] = []
    for i in sys.stochastic_indices:
        row = [zero] * (width + 1)
        for (r, c), x in sys[i].coeffs:
            row[r * n + c] += x
        row[nx + ns + i] = one
        row[-1] = sys[i].rhs
        rows.append(row)
        basis.append(nx + ns + i)
    for s, idx in enumerate(dp):
        row = [zero] * (width + 1)
        for (r, c), x in sys[idx].coeffs:
            row[r * n + c] += x
        row[nx + s] = one
        row[-1] = sys[idx].rhs
        rows.append(row)
        basis.append(nx + s)

    tab = _Tableau(rows, basis)
    phase1 = [zero] * (nx + ns) + [-one] * nart
    tab.run(phase1, width)
    if any(tab.rows[i][-1] for i, b in enumerate(tab.basis) if b >= nx + ns):
        raise ArithmeticError("polytope reported infeasible")

    # drive zero-level artificials out of the basis, dropping redundant rows
    for i in reversed(range(len(tab.rows))):
        if tab.basis[i] >= nx + ns:
            c = next((k for k in range(nx + ns) if tab.rows[i][k]), None)
            if c is None:
                del tab.rows[i]
                del tab.basis[i]
            else:
                tab.pivot(i, c)

    cost = list(u.entries) + [zero] * (ns + nart)
    tab.run(cost, nx + ns)

    x = [zero] * nx
    for i, b in enumerate(tab.basis):
        if b < nx:
            x[b] = tab.rows[i][-1]
    a = RMatrix(n, n, tuple(x))
    cert = is_extreme(a, sys)
    if not cert:
        raise ArithmeticError("simplex optimum is not a vertex")
    return OptimizationResult(_utility_value(u, a), a, SIMPLEX, cert.tight, tab.pivots)


def random_utility(n: int, rng: random.Random,
                   low: int = PROBE_LOW, high: int = PROBE_HIGH) -> RMatrix:
    """Independent uniform integers in [low, high] per entry."""
    return RMatrix.from_rows([[rng.randint(low, high) for _ in range(n)] for _ in range(n)])


def trial_rng(seed: int, trial: int) -> random.Random:
    """Per-trial generator so that trials can run in any order."""
    return random.Random(f"ldp-probe:{seed}:{trial}")


@dataclass
class ProbeReport:
    n: int
    t: Fraction
    seed: int
    trials_run: int = 0
    counters: list[RMatrix] = field(default_factory=list)
    counter_utilities: list[RMatrix] = field(default_factory=list)
    optima: list[RMatrix] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)


def conjecture_probe(n: int, t, trials: int, seed: int, keep_optima: bool = False,
                     check=None) -> ProbeReport:
    """Random-objective search for extreme points outside the known families.

    Every optimum is confirmed to be extreme; optima tagged Neither are re-checked
    independently and recorded as counterexample candidates.  ``check``, if
    given, is called as ``check(A, sys)`` and returns a list of failure
    strings, which are accumulated in the report.
    """
    tp = as_privacy(t)
    if tp.t == 1:
        raise ValueError("the probe needs t > 1")
    sys = build_system(n, tp)
    report = ProbeReport(n, tp.t, seed)
    for trial in range(trials):
        u = random_utility(n, trial_rng(seed, trial))
        res = simplex_optimize(u, sys)
        a = res.argmax
        if keep_optima:
            report.optima.append(a)
        if check is not None:
            report.failures.extend(f"trial {trial}: {msg}" for msg in check(a, sys))
        if is_counterexample(a, tp.t):
            report.counters.append(a)
            report.counter_utilities.append(u)
        report.trials_run += 1
    return report


def is_counterexample(a: RMatrix, t) -> bool:
    """True for an extreme point outside both characterized families.

    Membership and extremality are recomputed here rather than taken from the
    optimizer's own certificate.
    """
    if family_membership(a, t) != NEITHER:
        return False
    sys = build_system(a.rows, t)
    return bool(membership(a, sys)) and bool(is_extreme(a, sys))

"""Structural statistics of a mechanism and its extremality certificate.

Positions and column indices are 0-based throughout the Python API.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import RMatrix, diag, format_rational, mat_rank, rank_of_rows
from .polytope import ConstraintSystem, require_member, tight_set

DPRIME = "DPrime"
DTILDE = "DTilde"
OTHER_EXTREME = "OtherExtreme"
NOT_EXTREME = "NotExtreme"


def support(a: RMatrix) -> frozenset[int]:
    """Indices of the nonzero columns."""
    return frozenset(j for j in range(a.cols) if any(a.col(j)))


def loose_entries(a: RMatrix, t) -> frozenset[tuple[int, int]]:
    """Positions (i, j) whose entry is neither t * min nor max / t of column j.

    On a zero column both targets are 0, so zero columns contribute nothing.
    """
    t = Fraction(getattr(t, "t", t))
    out = set()
    for j in range(a.cols):
        col = a.col(j)
        targets = {t * min(col), max(col) / t}
        out.update((i, j) for i, x in enumerate(col) if x not in targets)
    return frozenset(out)


@dataclass(frozen=True)
class TildeForm:
    """A with every nonzero column divided by its minimum.

    ``mins[j]`` is the column minimum (0 off the support) and ``mins_inv[j]``
    its reciprocal (0 off the support), so ``tilde = A diag(mins_inv)`` and
    ``tilde diag(mins) = A``.
    """

    tilde: RMatrix
    mins: tuple[Fraction, ...]
    mins_inv: tuple[Fraction, ...]


def tilde_normalize(a: RMatrix) -> TildeForm:
    mins = tuple(min(a.col(j)) for j in range(a.cols))
    mins_inv = tuple(1 / m if m else Fraction(0) for m in mins)
    tilde = a @ diag(mins_inv)
    if tilde @ diag(mins) != a:
        raise ArithmeticError("tilde form does not reconstruct the matrix")
    return TildeForm(tilde, mins, mins_inv)


def column_tight_span_dim(a: RMatrix, sys: ConstraintSystem, j: int) -> int:
    """Dimension of the span of tight privacy constraints acting on column j.

    Coefficient vectors are restricted to the n coordinates of column j.
    """
    require_member(a, sys)
    n = sys.n
    vectors = []
    for idx in sys.dp_column_indices(j):
        c = sys[idx]
        if c.is_tight(a):
            v = [Fraction(0)] * n
            for (r, _), x in c.coeffs:
                v[r] += x
            vectors.append(v)
    return rank_of_rows(vectors)


@dataclass(frozen=True)
class ExtremeCertificate:
    is_extreme: bool
    tight: frozenset[int]
    rank: int

    def __bool__(self) -> bool:
        return self.is_extreme


def is_extreme(a: RMatrix, sys: ConstraintSystem) -> ExtremeCertificate:
    """Extreme iff the tight constraints span the full n^2-dimensional space."""
    tight = tight_set(a, sys)
    n2 = sys.n * sys.n
    rank = rank_of_rows(sys[idx].vector(sys.n) for idx in sorted(tight))
    return ExtremeCertificate(rank == n2, tight, rank)


def family_tag(gamma_size: int, lam: frozenset, rank: int, extreme: bool) -> str:
    if not extreme:
        return NOT_EXTREME
    if gamma_size == 1:
        return DPRIME
    if not lam and rank == gamma_size:
        return DTILDE
    return OTHER_EXTREME


@dataclass(frozen=True)
class AnalysisReport:
    gamma: frozenset[int]
    lam: frozenset[tuple[int, int]]
    rank: int
    tight: frozenset[int]
    tight_rank: int
    is_extreme: bool
    family: str

    def to_dict(self, sys: ConstraintSystem | None = None) -> dict:
        """JSON-ready form; positions are reported 1-based."""
        d = {
            "gamma": [j + 1 for j in sorted(self.gamma)],
            "lambda": [[i + 1, j + 1] for i, j in sorted(self.lam)],
            "rank": self.rank,
            "isExtreme": self.is_extreme,
            "familyTag": self.family,
            "tightIndices": sorted(self.tight),
            "tightRank": self.tight_rank,
        }
        if sys is not None:
            d["tightLabels"] = [sys[i].label for i in sorted(self.tight)]
            d["n"] = sys.n
            d["t"] = format_rational(sys.t.t)
        return d


def analyze(a: RMatrix, sys: ConstraintSystem) -> AnalysisReport:
    cert = is_extreme(a, sys)
    gamma = support(a)
    lam = loose_entries(a, sys.t)
    rank = mat_rank(a)
    return AnalysisReport(
        gamma=gamma,
        lam=lam,
        rank=rank,
        tight=cert.tight,
        tight_rank=cert.rank,
        is_extreme=cert.is_extreme,
        family=family_tag(len(gamma), lam, rank, cert.is_extreme),
    )

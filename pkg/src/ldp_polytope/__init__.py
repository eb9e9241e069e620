"""Exact tools for the polytope of locally eps-differentially-private mechanisms."""

from .analysis import (AnalysisReport, TildeForm, analyze, column_tight_span_dim,
                       is_extreme, loose_entries, support, tilde_normalize)
from .core import (LinearSolution, Rational, RMatrix, SolveStatus, format_rational,
                   mat_rank, parse_rational, rank_of_rows, solve_linear)
from .enumeration import (Pattern, PermutationPair, VertexSet, canonical_form,
                          enumerate_corner_family, enumerate_tight_family,
                          family_membership, generator_vertices, vertex_oracle)
from .optimize import (OptimizationResult, conjecture_probe, optimize_over_vertices,
                       simplex_optimize)
from .polytope import (ConstraintSystem, NotInPolytopeError, PrivacyParameter,
                       build_system, membership, nonneg_redundancy_check, tight_set)

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "TildeForm",
    "analyze",
    "column_tight_span_dim",
    "is_extreme",
    "loose_entries",
    "support",
    "tilde_normalize",
    "LinearSolution",
    "Rational",
    "RMatrix",
    "SolveStatus",
    "format_rational",
    "mat_rank",
    "parse_rational",
    "rank_of_rows",
    "solve_linear",
    "Pattern",
    "PermutationPair",
    "VertexSet",
    "canonical_form",
    "enumerate_corner_family",
    "enumerate_tight_family",
    "family_membership",
    "generator_vertices",
    "vertex_oracle",
    "OptimizationResult",
    "conjecture_probe",
    "optimize_over_vertices",
    "simplex_optimize",
    "ConstraintSystem",
    "NotInPolytopeError",
    "PrivacyParameter",
    "build_system",
    "membership",
    "nonneg_redundancy_check",
    "tight_set",
]

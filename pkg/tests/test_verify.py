from fractions import Fraction

import pytest

from ldp_polytope.core import RMatrix
from ldp_polytope.enumeration import corner_matrix
from ldp_polytope.polytope import build_system
from ldp_polytope.verify import (POINT_CHECKS, check_extreme_point, check_family,
                                 check_no_constant_support_column, check_rank_equals_support,
                                 check_two_column_form, make_permutation_check,
                                 run_suite)

F = Fraction


def by_name(results):
    return {r.name: r for r in results}


def test_every_check_passes_on_known_vertices(ex4, ex5):
    for a, n in ((ex4, 4), (ex5, 5), (corner_matrix(3, 1), 3)):
        assert check_extreme_point(a, build_system(n, 2), permutations=5) == []


def test_checks_fire_on_bad_points(ex3):
    sys3 = build_system(3, 2)
    # full support and rank 3, yet one loose entry keeps it off the vertex set
    msgs = check_extreme_point(ex3, sys3)
    assert "extremality: point is not extreme" in msgs
    uniform = RMatrix.constant(3, 3, F(1, 3))
    assert check_rank_equals_support(uniform, sys3)
    assert check_no_constant_support_column(uniform, sys3)
    sys2 = build_system(2, 2)
    skew = RMatrix.from_rows([[F(1, 2), F(1, 2)], [F(1, 3), F(2, 3)]])
    assert check_two_column_form(skew, sys2)


def test_family_check_flags_loose_free_outsider():
    sys = build_system(3, 2)
    a = RMatrix.from_rows([[1, 2, 0], [2, 1, 0], [1, 2, 0]]).scale(F(1, 3))
    assert check_family(a, sys) == []
    # tilde rows (1,2,1), (2,1,2), (1,2,1) with a non-unique scaling: loose-free,
    # full support, rank 2, so it is a non-vertex the family check must reject
    b = RMatrix.from_rows([[F(1, 12), F(2, 3), F(1, 4)],
                           [F(1, 6), F(1, 3), F(1, 2)],
                           [F(1, 12), F(2, 3), F(1, 4)]])
    msgs = check_family(b, sys)
    assert len(msgs) == 2
    assert "full-support" in msgs[1]
    assert check_extreme_point(b, sys)[0] == "extremality: point is not extreme"


def test_permutation_check_deterministic(ex5):
    sys = build_system(5, 2)
    fn = make_permutation_check(8, seed=1)
    assert fn(ex5, sys) == [] == fn(ex5, sys)


def test_point_check_names():
    assert set(POINT_CHECKS) >= {"rank_equals_support", "loose_entry_bound",
                                 "column_tight_span", "two_column_form"}


def test_suite_n2():
    res = by_name(run_suite(2, 2, permutations=3, samples=10))
    assert all(r.passed for r in res.values())
    assert res["generators_extreme"].checked == 4
    assert res["oracle_equivalence"].checked == 4


def test_suite_eps_zero():
    for n in (1, 2, 3):
        res = by_name(run_suite(n, 1, permutations=2, samples=5))
        assert all(r.passed for r in res.values()), n
        assert res["generators_extreme"].checked == n
    assert "brute force" in by_name(run_suite(2, 1))["eps_zero_corners_only"].note


def test_suite_n5_reports_strict_containment(ex5):
    res = by_name(run_suite(5, 2, extra=[ex5], permutations=2, samples=5))
    assert all(r.passed for r in res.values())
    assert "containment is strict" in res["supplied_matrices"].note
    d = res["supplied_matrices"].to_dict()
    assert d["passed"] and d["checked"] == 1


def test_suite_reports_bad_supplied_matrix():
    res = by_name(run_suite(2, 2, extra=[RMatrix.identity(2)], permutations=1, samples=2))
    sup = res["supplied_matrices"]
    assert not sup.passed
    assert sup.to_dict()["witness"] == str(RMatrix.identity(2))


@pytest.mark.slow
def test_suite_n3_full():
    res = by_name(run_suite(3, 2, permutations=3, samples=30))
    assert all(r.passed for r in res.values()), [r.to_dict() for r in res.values() if not r.passed]
    assert res["oracle_equivalence"].checked == 33

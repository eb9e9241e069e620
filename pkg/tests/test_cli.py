import json
from fractions import Fraction

import pytest

from ldp_polytope.cli import main, matrix_file, matrix_to_json
from ldp_polytope.core import RMatrix, parse_rational
from ldp_polytope.enumeration import corner_matrix


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_member(tmp_path, capsys, ex3):
    path = write(tmp_path, "ex3.json", matrix_file(ex3, Fraction(2)))
    code, out, _ = run(capsys, "check", "--input", path)
    assert code == 0
    assert json.loads(out)["verdict"] == "InD"


def test_check_identity_lists_violations(tmp_path, capsys):
    path = write(tmp_path, "id.json", matrix_file(RMatrix.identity(2), Fraction(2)))
    code, out, _ = run(capsys, "check", "--input", path)
    assert code == 1
    rep = json.loads(out)
    assert rep["verdict"] == "Violation"
    # row 1 holds the 1 in column 1 while row 2 holds 0 there, and vice versa
    assert rep["violationLabels"] == ["DP(1,2,1)", "DP(2,1,2)"]


@pytest.mark.parametrize("bad", ["1/0", "0.5"])
def test_check_parse_error(tmp_path, capsys, bad):
    doc = {"schema": "ldp-polytope/matrix/1", "n": 2, "t": "2",
           "matrix": [["1", "0"], [bad, "0"]]}
    code, _, err = run(capsys, "check", "--input", write(tmp_path, "bad.json", doc))
    assert code == 2
    assert "matrix[1][0]" in err


def test_check_rejects_float_t(tmp_path, capsys, ex3):
    path = write(tmp_path, "ex3.json", matrix_file(ex3, Fraction(2)))
    code, _, err = run(capsys, "check", "--input", path, "--t", "2.0")
    assert code == 2 and "t:" in err


def test_check_json_syntax_error(tmp_path, capsys):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    code, _, err = run(capsys, "check", "--input", str(p))
    assert code == 2 and "line 1" in err


def test_analyze_5x5(tmp_path, capsys, ex5):
    path = write(tmp_path, "ex5.json", matrix_file(ex5, Fraction(2)))
    code, out, _ = run(capsys, "analyze", "--input", path)
    assert code == 0
    rep = json.loads(out)
    assert rep["isExtreme"] is True
    assert rep["lambda"] == [[5, 3]]
    assert rep["rank"] == 4
    assert rep["familyTag"] == "OtherExtreme"
    assert rep["gamma"] == [1, 2, 3, 4]


def test_analyze_corner_and_uniform(tmp_path, capsys):
    path = write(tmp_path, "e1.json", matrix_file(corner_matrix(3, 0), Fraction(2)))
    code, out, _ = run(capsys, "analyze", "--input", path)
    assert code == 0 and json.loads(out)["familyTag"] == "DPrime"
    path = write(tmp_path, "u.json", matrix_file(RMatrix.constant(3, 3, Fraction(1, 3)), Fraction(2)))
    code, out, _ = run(capsys, "analyze", "--input", path)
    assert code == 0 and json.loads(out)["isExtreme"] is False


def test_analyze_non_member(tmp_path, capsys):
    path = write(tmp_path, "id.json", matrix_file(RMatrix.identity(3), Fraction(2)))
    code, _, err = run(capsys, "analyze", "--input", path)
    assert code == 1 and "not in the polytope" in err


def _vertices(out):
    return [tuple(tuple(parse_rational(x) for x in row) for row in v["matrix"])
            for v in json.loads(out)["vertices"]]


def test_enumerate_generator_and_oracle_agree(capsys):
    code, gen, _ = run(capsys, "enumerate", "--n", 2, "--t", "2")
    assert code == 0
    code, orc, _ = run(capsys, "enumerate", "--n", 2, "--t", "2", "--mode", "oracle")
    assert code == 0
    assert len(_vertices(gen)) == 4
    assert sorted(_vertices(gen)) == sorted(_vertices(orc))
    assert {v["provenance"] for v in json.loads(orc)["vertices"]} == {"Oracle"}


def test_enumerate_eps_zero(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", 3, "--t", "1")
    assert code == 0
    assert sorted(_vertices(out)) == sorted(
        tuple(tuple(r) for r in corner_matrix(3, j).to_rows()) for j in range(3))


def test_enumerate_canonical(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", 2, "--t", "2", "--canonical")
    assert code == 0 and json.loads(out)["count"] == 2


def test_enumerate_oracle_limits(capsys):
    code, _, err = run(capsys, "enumerate", "--n", 4, "--t", "2", "--mode", "oracle")
    assert code == 2 and "--budget" in err
    code, _, err = run(capsys, "enumerate", "--n", 4, "--t", "2", "--mode", "oracle",
                       "--budget", 100)
    assert code == 1 and "budget exhausted" in err


def test_enumerate_csv(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", 2, "--t", "2", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "index,provenance,a11,a12,a21,a22"
    assert "1/3,2/3,2/3,1/3" in out


def test_eps_flag(capsys):
    code, a, _ = run(capsys, "enumerate", "--n", 2, "--eps-ln2-multiple", 1)
    _, b, _ = run(capsys, "enumerate", "--n", 2, "--t", "2")
    assert code == 0 and a == b
    code, _, _ = run(capsys, "enumerate", "--n", 2, "--eps-ln2-multiple", 1, "--t", "2")
    assert code == 2


def test_emitted_matrices_pass_check(tmp_path, capsys):
    _, out, _ = run(capsys, "enumerate", "--n", 3, "--t", "3/2")
    for k, v in enumerate(json.loads(out)["vertices"]):
        doc = {"schema": "ldp-polytope/matrix/1", "n": 3, "t": "3/2", "matrix": v["matrix"]}
        code, _, _ = run(capsys, "check", "--input", write(tmp_path, f"v{k}.json", doc))
        assert code == 0


def test_output_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run(capsys, "enumerate", "--n", 3, "--t", "2", "--output", p)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    for p in (a, b):
        run(capsys, "probe", "--n", 3, "--t", "2", "--trials", 5, "--seed", 7, "--output", p)
    assert a.read_bytes() == b.read_bytes()


def test_optimize(tmp_path, capsys):
    doc = {"schema": "ldp-polytope/utility/1", "n": 2,
           "weights": matrix_to_json(RMatrix.identity(2))}
    code, out, _ = run(capsys, "optimize", "--t", "2", "--input", write(tmp_path, "u.json", doc))
    assert code == 0
    rep = json.loads(out)
    assert rep["value"] == "4/3" and rep["method"] == "Simplex"
    doc = {"schema": "ldp-polytope/utility/1", "weights": [["-5/2"]]}
    code, out, _ = run(capsys, "optimize", "--t", "3", "--input", write(tmp_path, "u1.json", doc))
    assert code == 0 and json.loads(out)["value"] == "-5/2"


def test_probe(capsys, tmp_path):
    code, out, err = run(capsys, "probe", "--n", 2, "--t", "2", "--trials", 20, "--seed", 3,
                         "--counter-dir", tmp_path / "c")
    assert code == 0
    rep = json.loads(out)
    assert rep["trialsRun"] == 20 and rep["countersFound"] == []
    assert "20 trials" in err


def test_verify_n2_eps_zero(capsys):
    code, out, _ = run(capsys, "verify", "--n", 2, "--t", "1")
    rep = json.loads(out)
    assert code == 0 and rep["allPassed"]
    suite = next(s for s in rep["suites"] if s["suite"] == "eps_zero_corners_only")
    assert suite["passed"] and "brute force" in suite["note"]


def test_verify_n5_with_supplied_matrix(tmp_path, capsys, ex5):
    path = write(tmp_path, "ex5.json", matrix_file(ex5, Fraction(2)))
    code, out, _ = run(capsys, "verify", "--n", 5, "--t", "2", "--input", path)
    rep = json.loads(out)
    assert code == 0 and rep["allPassed"]
    suite = next(s for s in rep["suites"] if s["suite"] == "supplied_matrices")
    assert "containment is strict" in suite["note"]


@pytest.mark.slow
def test_verify_n3(capsys):
    code, out, _ = run(capsys, "verify", "--n", 3, "--t", "2", "--permutations", 3)
    rep = json.loads(out)
    assert code == 0 and rep["allPassed"]
    assert any(s["suite"] == "oracle_equivalence" and s["passed"] for s in rep["suites"])


def test_usage_errors(capsys):
    assert run(capsys, "enumerate", "--t", "2")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "enumerate", "--n", 2)[0] == 2
    assert run(capsys, "enumerate", "--n", 2, "--t", "1/2")[0] == 2

"""Command-line front end: ``ldp-polytope <command> [options]``.

Exit codes: 0 success/pass, 1 semantic negative (violation, failed suite,
non-member input), 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from .analysis import analyze
from .core import RMatrix, format_rational, parse_rational
from .enumeration import (BudgetExhausted, ORACLE_MAX_N, generator_vertices,
                          vertex_oracle)
from .optimize import conjecture_probe, simplex_optimize
from .polytope import PrivacyParameter, build_system, membership
from .verify import check_extreme_point, run_suite

MATRIX_SCHEMA = "ldp-polytope/matrix/1"
UTILITY_SCHEMA = "ldp-polytope/utility/1"
VERTICES_SCHEMA = "ldp-polytope/vertices/1"
REPORT_SCHEMA = "ldp-polytope/report/1"

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def matrix_to_json(a: RMatrix) -> list[list[str]]:
    return [[format_rational(x) for x in a.row(i)] for i in range(a.rows)]


def parse_matrix(raw, where: str = "matrix") -> RMatrix:
    if not isinstance(raw, list) or not raw:
        raise InputError(f"{where}: expected a nonempty array of rows")
    rows = []
    for i, row in enumerate(raw):
        if not isinstance(row, list):
            raise InputError(f"{where}[{i}]: expected an array")
        vals = []
        for j, x in enumerate(row):
            try:
                vals.append(parse_rational(x))
            except ValueError as exc:
                raise InputError(f"{where}[{i}][{j}]: {exc}") from None
        rows.append(vals)
    if any(len(r) != len(rows) for r in rows):
        raise InputError(f"{where}: matrix must be square")
    return RMatrix.from_rows(rows)


def matrix_file(a: RMatrix, t: Fraction, **extra) -> dict:
    d = {"schema": MATRIX_SCHEMA, "n": a.rows, "t": format_rational(t),
         "matrix": matrix_to_json(a)}
    d.update(extra)
    return d


def load_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_matrix_file(path: str, key: str = "matrix", schema: str = MATRIX_SCHEMA):
    """Return (matrix, t or None) from a matrix or utility file."""
    doc = load_json(path)
    if not isinstance(doc, dict):
        raise InputError(f"{path}: expected a JSON object")
    if doc.get("schema", schema) != schema:
        raise InputError(f"{path}: unsupported schema {doc.get('schema')!r}")
    if key not in doc:
        raise InputError(f"{path}: missing {key!r}")
    a = parse_matrix(doc[key], key)
    if "n" in doc and doc["n"] != a.rows:
        raise InputError(f"{path}: n = {doc['n']} but the matrix is {a.rows}x{a.rows}")
    t = None
    if "t" in doc:
        try:
            t = parse_rational(doc["t"])
        except ValueError as exc:
            raise InputError(f"{path}: t: {exc}") from None
    return a, t


def resolve_t(args, file_t: Fraction | None = None) -> PrivacyParameter:
    if args.t is not None and args.eps_ln2_multiple is not None:
        raise InputError("give either --t or --eps-ln2-multiple, not both")
    try:
        if args.eps_ln2_multiple is not None:
            return PrivacyParameter.from_ln2_multiple(args.eps_ln2_multiple)
        if args.t is not None:
            return PrivacyParameter(parse_rational(args.t))
        if file_t is not None:
            return PrivacyParameter(file_t)
    except ValueError as exc:
        raise InputError(f"t: {exc}") from None
    raise InputError("the privacy parameter is required (--t or a 't' field in the input)")


def emit(args, payload, table: list[list[str]] | None = None) -> None:
    """Write JSON (or CSV where a table is available) to --output or stdout."""
    if args.format == "csv" and table is not None:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(table)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if args.output and args.output != "-":
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def require_n(args) -> int:
    if args.n is None or args.n < 1:
        raise InputError("--n must be a positive integer")
    return args.n


# ---------------------------------------------------------------------------


def cmd_check(args) -> int:
    a, file_t = load_matrix_file(_need_input(args))
    tp = resolve_t(args, file_t)
    sys_ = build_system(a.rows, tp)
    verdict = membership(a, sys_)
    payload = {
        "schema": REPORT_SCHEMA,
        "command": "check",
        "n": a.rows,
        "t": format_rational(tp.t),
        "verdict": "InD" if verdict else "Violation",
        "violations": list(verdict.violations),
        "violationLabels": [sys_[i].label for i in verdict.violations],
    }
    table = [["verdict", payload["verdict"]]] + [[str(i), sys_[i].label] for i in verdict.violations]
    emit(args, payload, table)
    return EXIT_OK if verdict else EXIT_NEGATIVE


def cmd_analyze(args) -> int:
    a, file_t = load_matrix_file(_need_input(args))
    tp = resolve_t(args, file_t)
    sys_ = build_system(a.rows, tp)
    verdict = membership(a, sys_)
    if not verdict:
        print(f"input is not in the polytope; violated: "
              f"{', '.join(sys_[i].label for i in verdict.violations)}", file=sys.stderr)
        return EXIT_NEGATIVE
    report = analyze(a, sys_)
    payload = {"schema": REPORT_SCHEMA, "command": "analyze"}
    payload.update(report.to_dict(sys_))
    payload["matrix"] = matrix_to_json(a)
    table = [[k, json.dumps(v)] for k, v in payload.items()]
    emit(args, payload, table)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    n = require_n(args)
    tp = resolve_t(args)
    if args.mode == "oracle":
        if n > ORACLE_MAX_N and args.budget is None:
            raise InputError(f"oracle mode needs --budget for n > {ORACLE_MAX_N}")
        try:
            vs = vertex_oracle(n, tp, budget=args.budget)
        except BudgetExhausted as exc:
            print(str(exc), file=sys.stderr)
            return EXIT_NEGATIVE
    else:
        vs = generator_vertices(n, tp)
    if args.canonical:
        vs = vs.canonical()
    payload = {
        "schema": VERTICES_SCHEMA,
        "n": n,
        "t": format_rational(tp.t),
        "mode": args.mode,
        "canonical": bool(args.canonical),
        "count": len(vs),
        "countNote": "derived by this run; no closed-form count is known",
        "vertices": [{"provenance": p, "matrix": matrix_to_json(v)}
                     for v, p in zip(vs.vertices, vs.provenance)],
    }
    table = [["index", "provenance"] + [f"a{i + 1}{j + 1}" for i in range(n) for j in range(n)]]
    for k, (v, p) in enumerate(zip(vs.vertices, vs.provenance)):
        table.append([str(k), p] + [format_rational(x) for x in v.entries])
    emit(args, payload, table)
    return EXIT_OK


def cmd_verify(args) -> int:
    n = require_n(args)
    tp = resolve_t(args)
    extra = []
    for path in args.input or []:
        a, _ = load_matrix_file(path)
        if a.rows != n:
            raise InputError(f"{path}: expected an {n}x{n} matrix")
        extra.append(a)
    if n > 4 and not extra:
        print("note: n > 4 checks only the corner family unless matrices are supplied",
              file=sys.stderr)
    results = run_suite(n, tp, extra=extra, permutations=args.permutations,
                        samples=args.samples, seed=args.seed)
    ok = all(r.passed for r in results)
    payload = {
        "schema": REPORT_SCHEMA,
        "command": "verify",
        "n": n,
        "t": format_rational(tp.t),
        "allPassed": ok,
        "suites": [r.to_dict() for r in results],
    }
    table = [["suite", "passed", "checked", "note"]] + [
        [r.name, "pass" if r.passed else "FAIL", str(r.checked), r.note] for r in results]
    emit(args, payload, table)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_optimize(args) -> int:
    u, _ = load_matrix_file(_need_input(args), key="weights", schema=UTILITY_SCHEMA)
    n = args.n if args.n is not None else u.rows
    if u.rows != n:
        raise InputError(f"utility is {u.rows}x{u.rows} but --n is {n}")
    tp = resolve_t(args)
    res = simplex_optimize(u, build_system(n, tp))
    payload = {
        "schema": REPORT_SCHEMA,
        "command": "optimize",
        "n": n,
        "t": format_rational(tp.t),
        "method": res.method,
        "value": format_rational(res.value),
        "argmax": matrix_to_json(res.argmax),
        "certificate": sorted(res.certificate),
    }
    table = [["value", payload["value"]], ["method", res.method]] + [
        ["argmax"] + row for row in payload["argmax"]]
    emit(args, payload, table)
    return EXIT_OK


def cmd_probe(args) -> int:
    n = require_n(args)
    tp = resolve_t(args)
    if tp.t == 1:
        raise InputError("probe needs t > 1")

    def check(a, sys_):
        return check_extreme_point(a, sys_, family=n <= 4)

    start = time.perf_counter()
    rep = conjecture_probe(n, tp, args.trials, args.seed, check=check if args.check else None)
    elapsed = time.perf_counter() - start
    payload = {
        "schema": REPORT_SCHEMA,
        "command": "probe",
        "n": n,
        "t": format_rational(tp.t),
        "seed": args.seed,
        "trialsRun": rep.trials_run,
        "utilityDistribution": "iid uniform integers in [-9, 9]",
        "countersFound": [matrix_to_json(a) for a in rep.counters],
        "propertyFailures": rep.failures,
    }
    if args.counter_dir:
        out = Path(args.counter_dir)
        out.mkdir(parents=True, exist_ok=True)
        for k, (a, u) in enumerate(zip(rep.counters, rep.counter_utilities)):
            doc = matrix_file(a, tp.t, utility=matrix_to_json(u))
            (out / f"counter_{k:04d}.json").write_text(json.dumps(doc, indent=2) + "\n")
    emit(args, payload)
    print(f"{rep.trials_run} trials in {elapsed:.1f}s, {len(rep.counters)} candidate(s)",
          file=sys.stderr)
    return EXIT_OK if not rep.failures else EXIT_NEGATIVE


def _need_input(args) -> str:
    paths = args.input
    if isinstance(paths, list):
        if len(paths) != 1:
            raise InputError("exactly one --input is required")
        return paths[0]
    if not paths:
        raise InputError("--input is required")
    return paths


COMMANDS = {
    "check": cmd_check,
    "analyze": cmd_analyze,
    "enumerate": cmd_enumerate,
    "verify": cmd_verify,
    "optimize": cmd_optimize,
    "probe": cmd_probe,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ldp-polytope",
        description="Exact analysis of the local differential-privacy polytope.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_n=False):
        p.add_argument("--n", type=int, required=needs_n, help="alphabet size")
        p.add_argument("--t", help="t = e^eps as an exact rational, e.g. 2 or 3/2")
        p.add_argument("--eps-ln2-multiple", type=int, metavar="K",
                       help="set eps = K ln 2, i.e. t = 2**K")
        p.add_argument("--output", help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("check", help="test membership of a matrix file")
    common(p)
    p.add_argument("--input", required=True)

    p = sub.add_parser("analyze", help="support, loose entries, rank and extremality")
    common(p)
    p.add_argument("--input", required=True)

    p = sub.add_parser("enumerate", help="list extreme points")
    common(p, needs_n=True)
    p.add_argument("--mode", choices=("generator", "oracle"), default="generator")
    p.add_argument("--canonical", action="store_true",
                   help="one representative per row/column permutation orbit")
    p.add_argument("--budget", type=int, help="candidate-basis budget for the oracle")

    p = sub.add_parser("verify", help="run the structural theorem suites")
    common(p, needs_n=True)
    p.add_argument("--input", action="append", help="extra matrix file (repeatable)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--permutations", type=int, default=10,
                   help="random permutation pairs per vertex")
    p.add_argument("--samples", type=int, default=50,
                   help="random vertex midpoints to test for non-extremality")

    p = sub.add_parser("optimize", help="maximize <U, A> with the exact simplex")
    common(p)
    p.add_argument("--input", required=True, help="utility file")

    p = sub.add_parser("probe", help="random-objective search for unexpected vertices")
    common(p, needs_n=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-check", dest="check", action="store_false",
                   help="skip the structural checks on each optimum")
    p.add_argument("--counter-dir", help="write each candidate as a matrix file here")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

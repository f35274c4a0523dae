"""Command-line front end: batch computation and self-verification.

A job is a single JSON spec file; flags override individual fields.  All
rationals in specs and reports are strings "p/q" or "p".  Output on stdout
is byte-identical across runs for the same job: reports are dumped with
sorted keys and timing goes to stderr only.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import multiindex as mi
from .abel import (
    AffineGrid,
    LinearGrid,
    abel_closed,
    abel_operator_form,
    binomial_type_classify,
    linear_node_matrix,
)
from .errors import BadParams, DeltagonError, NonExactDivision
from .goncarov import GoncarovTable, LowerSet, TableGrid, biorthogonality_check, interpolation_solve
from .mpoly import MPoly
from .operators import DeltaSystem, system_from_specs
from .rationals import format_rational, parse_rational
from .render import render, render_plain
from .sequences import BasicSequence, appell_verify, binomial_identity_check, verify_basic_properties

TARGETS = ("basic", "goncarov", "abel", "solve", "verify")
SUITES = ("biorthogonality", "binomial", "appell", "basic")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        if args.command == "render":
            code = run_render(args)
        else:
            spec = load_spec(args.spec)
            apply_overrides(spec, args)
            if args.command == "compute":
                code = run_compute(spec, args)
            else:
                code = run_verify(spec, args)
    except (BadParams, json.JSONDecodeError, OSError) as exc:
        print(f"deltagon: invalid input: {exc}", file=sys.stderr)
        return 2
    except NonExactDivision as exc:
        print(f"deltagon: internal invariant violated: {exc}", file=sys.stderr)
        return 3
    except DeltagonError as exc:
        print(f"deltagon: invalid input: {exc}", file=sys.stderr)
        return 2
    elapsed = (time.monotonic() - started) * 1000.0
    print(f"deltagon: {args.command} finished in {elapsed:.1f} ms", file=sys.stderr)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deltagon",
        description="exact delta-operator interpolation engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="compute polynomial families")
    compute.add_argument("--spec", required=True, help="job spec JSON file")
    compute.add_argument("--format", choices=("json", "plain", "latex"))
    compute.add_argument("--max-degree", type=int, dest="max_degree")
    compute.add_argument("--order", type=int)
    compute.add_argument("--no-crosscheck", action="store_true")
    compute.add_argument("--jobs", type=int, default=1)
    compute.add_argument("--explain", action="store_true")

    verify = sub.add_parser("verify", help="run an exact-identity suite")
    verify.add_argument("--spec", required=True)
    verify.add_argument("--format", choices=("json", "plain", "latex"))
    verify.add_argument("--max-degree", type=int, dest="max_degree")
    verify.add_argument("--order", type=int)
    verify.add_argument("--jobs", type=int, default=1)

    render_cmd = sub.add_parser("render", help="render a polynomial JSON file")
    render_cmd.add_argument("--input", default="-", help="file with JSON terms, - for stdin")
    render_cmd.add_argument("--format", choices=("json", "plain", "latex"), default="plain")
    render_cmd.add_argument("--dimension", type=int, default=None)
    return parser


def load_spec(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        spec = json.load(handle)
    if not isinstance(spec, dict):
        raise BadParams("job spec must be a JSON object")
    return spec


def apply_overrides(spec: dict, args) -> None:
    if getattr(args, "format", None):
        spec["format"] = args.format
    if getattr(args, "max_degree", None) is not None:
        spec["max_degree"] = args.max_degree
    if getattr(args, "order", None) is not None:
        spec["order"] = args.order


def _dimension(spec: dict) -> int:
    dim = spec.get("dimension")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise BadParams(f"dimension must be a positive integer, got {dim!r}")
    return dim


def _system(spec: dict, dim: int) -> DeltaSystem:
    ops = spec.get("system")
    if not isinstance(ops, list):
        raise BadParams("spec needs a 'system' list of operator specs")
    return system_from_specs(dim, ops)


def _grid(spec: dict, dim: int):
    body = spec.get("grid")
    if not isinstance(body, dict) or "kind" not in body:
        raise BadParams("spec needs a 'grid' object with a 'kind'")
    kind = body["kind"]
    if kind == "linear":
        return LinearGrid(_matrix(body.get("A"), dim))
    if kind == "affine":
        return AffineGrid(_vector(body.get("v"), dim), _matrix(body.get("A"), dim))
    if kind == "table":
        nodes = body.get("nodes")
        if not isinstance(nodes, list):
            raise BadParams("table grid needs a 'nodes' list")
        table = {}
        for entry in nodes:
            table[_index(entry.get("k"), dim)] = _vector(entry.get("z"), dim)
        return TableGrid(dim, table)
    raise BadParams(f"unknown grid kind {kind!r}")


def _matrix(rows, dim):
    if not isinstance(rows, list) or len(rows) != dim:
        raise BadParams(f"grid matrix must be a {dim}x{dim} array")
    return [[_rational(c) for c in row] for row in rows]


def _vector(entries, dim):
    if not isinstance(entries, list) or len(entries) != dim:
        raise BadParams(f"expected a length-{dim} vector, got {entries!r}")
    return [_rational(c) for c in entries]


def _rational(value):
    if isinstance(value, bool) or isinstance(value, float):
        raise BadParams(f"rationals must be integers or 'p/q' strings, got {value!r}")
    if isinstance(value, int):
        return parse_rational(str(value))
    if isinstance(value, str):
        return parse_rational(value)
    raise BadParams(f"rationals must be integers or 'p/q' strings, got {value!r}")


def _index(entry, dim):
    if not isinstance(entry, list) or len(entry) != dim:
        raise BadParams(f"index must be a length-{dim} list, got {entry!r}")
    for c in entry:
        if not isinstance(c, int) or isinstance(c, bool) or c < 0:
            raise BadParams(f"index entries must be naturals, got {entry!r}")
    return tuple(entry)


def _indices(spec: dict, dim: int) -> list:
    if "indices" in spec:
        raw = spec["indices"]
        if not isinstance(raw, list) or not raw:
            raise BadParams("'indices' must be a nonempty list of multi-indices")
        return sorted({_index(entry, dim) for entry in raw}, key=mi.grlex_key)
    maxdeg = spec.get("max_degree")
    if maxdeg is None:
        raise BadParams("spec needs 'indices' or 'max_degree'")
    if not isinstance(maxdeg, int) or maxdeg < 0:
        raise BadParams(f"max_degree must be a natural, got {maxdeg!r}")
    return list(mi.indices_up_to_weight(dim, maxdeg))


def _echo(spec: dict) -> dict:
    return json.loads(json.dumps(spec, sort_keys=True))


def _emit(report: dict) -> None:
    sys.stdout.write(json.dumps(report, indent=2, sort_keys=True))
    sys.stdout.write("\n")


# ----------------------------------------------------------------------
# compute

def run_compute(spec: dict, args) -> int:
    target = spec.get("target")
    if target not in ("basic", "goncarov", "abel", "solve"):
        raise BadParams(f"compute target must be basic|goncarov|abel|solve, got {target!r}")
    dim = _dimension(spec)
    system = _system(spec, dim)
    fmt = spec.get("format", "json")
    if fmt not in ("json", "plain", "latex"):
        raise BadParams(f"unknown format {fmt!r}")

    if target == "solve":
        results, extras = _compute_solve(spec, system, dim)
    elif target == "basic":
        indices = _indices(spec, dim)
        seq = BasicSequence(system)
        results = [(idx, seq.poly(idx)) for idx in indices]
        extras = {}
    elif target == "goncarov":
        indices = _indices(spec, dim)
        grid = _grid(spec, dim)
        table = GoncarovTable(system, grid)
        if len(indices) > 1:
            table.populate(max(sum(idx) for idx in indices), jobs=args.jobs)
        results = [(idx, table.poly(idx)) for idx in indices]
        extras = {}
    else:
        results, extras = _compute_abel(spec, system, dim, args)

    if fmt == "json":
        entries = []
        for idx, poly in results:
            entry = {} if idx is None else {"index": list(idx)}
            entry["poly"] = poly.to_json_terms()
            entries.append(entry)
        report = {"job": _echo(spec), "results": entries}
        report.update(extras)
        _emit(report)
    else:
        lines = []
        for idx, poly in results:
            text = render(poly, fmt)
            if len(results) == 1:
                lines.append(text)
            else:
                lines.append(f"[{','.join(map(str, idx))}] {text}")
        sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _compute_solve(spec: dict, system, dim):
    grid = _grid(spec, dim)
    raw_set = spec.get("lower_set")
    if not isinstance(raw_set, list) or not raw_set:
        raise BadParams("solve target needs a 'lower_set' list")
    try:
        lower = LowerSet([_index(entry, dim) for entry in raw_set])
    except ValueError as exc:
        raise BadParams(str(exc)) from exc
    raw_values = spec.get("values")
    if not isinstance(raw_values, list):
        raise BadParams("solve target needs a 'values' list of {k, b} objects")
    values = {}
    for entry in raw_values:
        values[_index(entry.get("k"), dim)] = _rational(entry.get("b"))
    solution = interpolation_solve(system, grid, lower, values)
    return [(None, solution)], {}


def _compute_abel(spec: dict, system, dim, args):
    grid = _grid(spec, dim)
    if not isinstance(grid, (LinearGrid, AffineGrid)):
        raise BadParams("abel target needs a linear or affine grid")
    indices = _indices(spec, dim)
    basic = BasicSequence(system)
    results = []
    explain = {}
    crosscheck = "skipped" if args.no_crosscheck else "ok"
    recurrence = None if args.no_crosscheck else GoncarovTable(system, grid, basic=basic)
    for idx in indices:
        closed = abel_closed(system, grid, idx, basic=basic)
        if recurrence is not None:
            operator = abel_operator_form(system, grid, idx, basic=basic)
            if operator != closed:
                raise NonExactDivision(
                    f"closed and operator routes disagree at index {idx}"
                )
            if recurrence.poly(idx) != closed:
                raise NonExactDivision(
                    f"closed route and recurrence disagree at index {idx}"
                )
        if args.explain:
            linear = grid if isinstance(grid, LinearGrid) else grid.linear
            matrix = linear_node_matrix(linear, idx)
            explain[",".join(map(str, idx))] = {
                "node_matrix": [[render_plain(e) for e in row] for row in matrix],
            }
        results.append((idx, closed))
    extras = {"crosscheck": crosscheck}
    if args.explain:
        extras["explain"] = explain
    return results, extras


# ----------------------------------------------------------------------
# verify

def run_verify(spec: dict, args) -> int:
    if spec.get("target", "verify") != "verify":
        raise BadParams("verify command needs a spec with target 'verify'")
    suite = spec.get("suite")
    if suite not in SUITES:
        raise BadParams(f"suite must be one of {SUITES}, got {suite!r}")
    dim = _dimension(spec)
    system = _system(spec, dim)
    maxdeg = spec.get("max_degree", 4)
    if not isinstance(maxdeg, int) or maxdeg < 0:
        raise BadParams(f"max_degree must be a natural, got {maxdeg!r}")

    details: dict = {}
    witness = None
    if suite == "basic":
        table = BasicSequence(system).table(maxdeg)
        axioms = verify_basic_properties(system, table, maxdeg)
        binom = binomial_identity_check(table, maxdeg, dim)
        passed = axioms.passed and binom.passed
        for name, ok, wit in (
            ("degree", axioms.degree_ok, axioms.degree_witness),
            ("normalization", axioms.normalization_ok, axioms.normalization_witness),
            ("lowering", axioms.lowering_ok, axioms.lowering_witness),
            ("binomial", binom.passed, binom.witness),
        ):
            details[name] = {"passed": ok, "witness": _jsonable(wit)}
            if witness is None and wit is not None:
                witness = wit
    elif suite == "biorthogonality":
        grid = _grid(spec, dim)
        table = GoncarovTable(system, grid).populate(maxdeg, jobs=args.jobs)
        report = biorthogonality_check(system, grid, maxdeg, table=table)
        passed = report.passed
        witness = report.witness
        details["checked_degree"] = report.checked_degree
    elif suite == "binomial":
        grid = _grid(spec, dim)
        report = binomial_type_classify(system, grid, maxdeg)
        passed = report.binomial_type
        witness = report.geometric_witness or report.algebraic_witness
        details["geometric"] = {
            "passed": report.geometric_ok,
            "witness": _jsonable(report.geometric_witness),
        }
        details["algebraic"] = {
            "passed": report.algebraic_ok,
            "witness": _jsonable(report.algebraic_witness),
        }
    else:  # appell
        order = spec.get("order", maxdeg)
        if not isinstance(order, int) or order < 0:
            raise BadParams(f"order must be a natural, got {order!r}")
        grid = _grid(spec, dim)
        polys = GoncarovTable(system, grid).populate(order, jobs=args.jobs)
        report = appell_verify(system, grid, polys, order)
        passed = report.passed
        witness = report.witness
        details["order"] = report.order
        if report.failed_form:
            details["failed_form"] = report.failed_form

    report_obj = {
        "job": _echo(spec),
        "suite": suite,
        "passed": passed,
        "witness": _jsonable(witness),
        "details": details,
    }
    _emit(report_obj)
    return 0 if passed else 1


def _jsonable(value):
    if value is None:
        return None
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    if isinstance(value, (list, dict, str, bool)) or isinstance(value, int):
        return value
    return format_rational(value)


# ----------------------------------------------------------------------
# render

def run_render(args) -> int:
    if args.input == "-":
        data = json.load(sys.stdin)
    else:
        with open(args.input, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    if not isinstance(data, list):
        raise BadParams("render input must be a JSON list of terms")
    dim = args.dimension
    if dim is None:
        if not data:
            raise BadParams("empty polynomial needs an explicit --dimension")
        exp = data[0].get("exp")
        if not isinstance(exp, list) or not exp:
            raise BadParams("term objects need a nonempty 'exp' list")
        dim = len(exp)
    poly = MPoly.from_json_terms(dim, data)
    sys.stdout.write(render(poly, args.format) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())

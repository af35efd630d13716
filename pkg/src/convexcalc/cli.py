"""Command-line front end.

Exit codes: 0 on success or an Equal verdict, 1 when a rule comes out as a
strict inequality (or a fuzz suite has failures), 2 on input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import gallery
from .coderivative import (
    BasePointInvalid,
    MonotonicityUncertified,
    NoResidualPoint,
    PointOutsideGraph,
    UnboundedSubdifferential,
    ValueUnattained,
    coderivative_chain,
    coderivative_intersect,
    coderivative_sum,
    componentwise_chain,
    domain_normal,
    optimal_value_subdiff,
    preimage_normal,
    solution_map_coderivative,
)
from .exact import DimensionMismatch
from .jsonio import (
    SchemaError,
    dumps,
    parse_affine,
    parse_function,
    parse_map,
    parse_set,
    parse_vector,
)
from .normals import (
    ContinuityHypothesisUnverifiable,
    PieceCapExceeded,
    PointOutsideDomain,
    RuleReport,
    chain_rule_affine,
    fermat_check,
    intersection_rule,
    max_rule,
    normal_cone,
    subdifferential,
    sum_rule,
)
from .oracle import RULES, run_fuzz
from .polyhedron import (
    DimensionCapExceeded,
    EmptySet,
    affine_hull,
    as_h,
    ri_point,
)
from .separation import (
    EnumerationCapExceeded,
    PointInsideSet,
    PointOutsideSet,
    euclid_project,
    properly_separate,
    strictly_separate,
)

INPUT_ERRORS = (
    SchemaError,
    DimensionMismatch,
    EmptySet,
    DimensionCapExceeded,
    EnumerationCapExceeded,
    PointInsideSet,
    PointOutsideSet,
    PointOutsideDomain,
    PointOutsideGraph,
    BasePointInvalid,
    ValueUnattained,
    NoResidualPoint,
    MonotonicityUncertified,
    UnboundedSubdifferential,
    ContinuityHypothesisUnverifiable,
    PieceCapExceeded,
    OSError,
    json.JSONDecodeError,
)

VERBS = (
    "ri-point",
    "affine-hull",
    "project",
    "separate",
    "normal-cone",
    "subdiff",
    "fermat",
    *(f"rule:{r}" for r in RULES),
    "gallery",
    "fuzz",
)


class UsageError(ValueError):
    pass


def _load(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno})", path) from None


def _inline_vector(text: str | None, flag: str) -> tuple:
    if text is None:
        raise UsageError(f"{flag} is required for this verb")
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        raise SchemaError("expected a JSON array", flag) from None
    return parse_vector(data, flag)


def _sets(args) -> list:
    if not args.set:
        raise UsageError("--set is required for this verb")
    return [as_h(parse_set(_load(p), p)) for p in args.set]


def _fns(args) -> list:
    if not args.fns:
        raise UsageError("--fns is required for this verb")
    return [parse_function(_load(p), p) for p in args.fns]


def _maps(args, count: int | None = None) -> list:
    if not args.map:
        raise UsageError("--map is required for this verb")
    if count is not None and len(args.map) != count:
        raise UsageError(f"--map expects {count} file(s)")
    return [parse_map(_load(p), p) for p in args.map]


def _one(items: list, what: str):
    if len(items) != 1:
        raise UsageError(f"expected exactly one {what}")
    return items[0]


def _split(base: tuple, n: int) -> tuple[tuple, tuple]:
    return base[:n], base[n:]


def dispatch(args) -> tuple[Any, int]:
    """Run one verb; returns the JSON-ready payload and the exit code."""
    verb = args.verb
    if verb == "ri-point":
        return ri_point(_one(_sets(args), "set")), 0
    if verb == "affine-hull":
        return affine_hull(_one(_sets(args), "set")), 0
    if verb == "project":
        return euclid_project(_inline_vector(args.point, "--point"), _one(_sets(args), "set")), 0
    if verb == "separate":
        sets = _sets(args)
        if len(sets) == 1:
            return strictly_separate(_inline_vector(args.point, "--point"), sets[0]), 0
        if len(sets) == 2:
            cert = properly_separate(*sets)
            return ({"separable": False} if cert is None else {"separable": True, "certificate": cert}), 0
        raise UsageError("separate takes one set with --point, or two sets")
    if verb == "normal-cone":
        return normal_cone(_one(_sets(args), "set"), _inline_vector(args.point, "--point")), 0
    if verb == "subdiff":
        return subdifferential(_one(_fns(args), "function"), _inline_vector(args.point, "--point")), 0
    if verb == "fermat":
        return {"minimizer": fermat_check(_one(_fns(args), "function"), _inline_vector(args.point, "--point"))}, 0
    if verb == "gallery":
        return {"ball-norm": gallery.BALL.description, "parabola-pair": gallery.parabola_counterexample()}, 0
    if verb == "fuzz":
        if args.rule not in RULES:
            raise UsageError(f"--rule must be one of {', '.join(RULES)}")
        dims = _inline_vector(args.dims, "--dims") if args.dims else (3, 3, 3)
        rep = run_fuzz(args.rule, args.seed, args.trials, tuple(int(d) for d in dims), not args.unqualified)
        return rep, 0 if rep.passed else 1
    report = _rule(verb[len("rule:"):], args)
    return report, 0 if report.equal else 1


def _rule(rule: str, args) -> RuleReport:
    point = _inline_vector(args.point, "--point")
    if rule == "intersection":
        return intersection_rule(_sets(args), point)
    if rule == "sum":
        return sum_rule(_fns(args), point)
    if rule == "max":
        return max_rule(_fns(args), point)
    if rule == "chain":
        if not args.map:
            raise UsageError("--map (an affine map file) is required")
        B = parse_affine(_load(args.map[0]), args.map[0])
        return chain_rule_affine(_one(_fns(args), "function"), B, point)
    if rule == "optimal-value":
        return optimal_value_subdiff(_one(_fns(args), "function"), _one(_maps(args), "map"), point)
    if rule == "componentwise":
        fs = _fns(args)
        return componentwise_chain(fs[0], fs[1:], point)
    if rule == "domain":
        return domain_normal(_one(_maps(args), "map"), point)
    if rule == "preimage":
        F = _one(_maps(args), "map")
        x, y = _split(point, F.n)
        return preimage_normal(F, _one(_sets(args), "target set"), x, y)
    direction = _inline_vector(args.dir, "--dir")
    if rule == "cod-sum":
        F1, F2 = _maps(args, 2)
        return coderivative_sum(F1, F2, *_split(point, F1.n), direction)
    if rule == "cod-chain":
        F, G = _maps(args, 2)
        return coderivative_chain(F, G, *_split(point, F.n), direction)
    if rule == "cod-intersect":
        F1, F2 = _maps(args, 2)
        return coderivative_intersect(F1, F2, *_split(point, F1.n), direction)
    if rule == "solution-map":
        F, G = _maps(args, 2)
        n = F.n - len(direction)
        return solution_map_coderivative(F, G, *_split(point, n), direction)
    raise UsageError(f"unknown rule {rule!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="convexcalc", description="Exact convex calculus on polyhedral data.")
    ap.add_argument("verb", choices=VERBS)
    ap.add_argument("--set", nargs="+", help="set files (H- or V-representation JSON)")
    ap.add_argument("--fns", nargs="+", help="max-affine function files")
    ap.add_argument("--map", nargs="+", help="polyhedral map files (affine map file for rule:chain)")
    ap.add_argument("--point", help="base point as a JSON array; for map rules the pair (x, y) concatenated")
    ap.add_argument("--dir", help="direction vector as a JSON array")
    ap.add_argument("--rule", help="rule name for fuzz")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--dims", help="dimension caps [n, p, q] for fuzz")
    ap.add_argument("--unqualified", action="store_true", help="fuzz with generators that break the anchor")
    ap.add_argument("--out", help="write the JSON report to this file instead of stdout")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload, code = dispatch(args)
    except (UsageError, *INPUT_ERRORS) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    text = dumps(payload)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""JSON encoding of rationals, polyhedra, functions, maps and reports.

Rationals travel as strings ``"p/q"`` or bare integers so nothing is lost.
Structure is checked with JSON Schema; errors carry the offending location.
"""
from __future__ import annotations

import dataclasses
import json
import math
from fractions import Fraction
from typing import Any

import jsonschema

from .exact import fmt
from .normals import Cone, MaxAffineFunction, RuleReport
from .coderivative import PolyhedralMap
from .polyhedron import AffineMap, HPolyhedron, VPolyhedron


class SchemaError(ValueError):
    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location


RAT = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^\s*-?\d+\s*(/\s*\d+\s*)?$"}]}
VECTOR = {"type": "array", "items": RAT}
MATRIX = {"type": "array", "items": VECTOR}

H_SCHEMA = {
    "type": "object",
    "required": ["dim"],
    "properties": {
        "dim": {"type": "integer", "minimum": 1},
        "ineq": {
            "type": "array",
            "items": {"type": "object", "required": ["a", "b"], "properties": {"a": VECTOR, "b": RAT}},
        },
        "eq": {
            "type": "array",
            "items": {"type": "object", "required": ["e", "d"], "properties": {"e": VECTOR, "d": RAT}},
        },
    },
}
V_SCHEMA = {
    "type": "object",
    "required": ["points"],
    "properties": {"dim": {"type": "integer", "minimum": 1}, "points": MATRIX, "rays": MATRIX, "lineality": MATRIX},
}
FUNCTION_SCHEMA = {
    "type": "object",
    "required": ["n", "pieces"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "pieces": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "object", "required": ["a", "b"], "properties": {"a": VECTOR, "b": RAT}},
        },
        "domain": {"oneOf": [{"type": "null"}, H_SCHEMA]},
    },
}
MAP_SCHEMA = {
    "type": "object",
    "required": ["n", "p", "graph"],
    "properties": {"n": {"type": "integer", "minimum": 1}, "p": {"type": "integer", "minimum": 1}, "graph": H_SCHEMA},
}
AFFINE_SCHEMA = {"type": "object", "required": ["A"], "properties": {"A": MATRIX, "b": VECTOR}}


def _location(path, root: str = "$") -> str:
    out = root
    for part in path:
        out += f"[{part}]" if isinstance(part, int) else f".{part}"
    return out


def validate(data: Any, schema: dict, location: str = "$") -> None:
    validator = jsonschema.Draft7Validator(schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: len(list(e.absolute_path)), reverse=True)
    if errors:
        err = errors[0]
        raise SchemaError(err.message, _location(err.absolute_path, location))


def parse_rat(x: Any, location: str = "$") -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SchemaError("rational must be an integer or a 'p/q' string", location)
    try:
        return Fraction(x.replace(" ", "")) if isinstance(x, str) else Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational {x!r}: {exc}", location) from None


def parse_vector(xs: Any, location: str = "$") -> tuple:
    if not isinstance(xs, list):
        raise SchemaError("expected an array", location)
    return tuple(parse_rat(x, f"{location}[{i}]") for i, x in enumerate(xs))


def _checked(build, location: str):
    try:
        return build()
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(str(exc), location) from None


def parse_h(data: dict, location: str = "$") -> HPolyhedron:
    validate(data, H_SCHEMA, location)
    A = [parse_vector(r["a"], f"{location}.ineq[{i}].a") for i, r in enumerate(data.get("ineq", []))]
    b = [parse_rat(r["b"], f"{location}.ineq[{i}].b") for i, r in enumerate(data.get("ineq", []))]
    E = [parse_vector(r["e"], f"{location}.eq[{i}].e") for i, r in enumerate(data.get("eq", []))]
    d = [parse_rat(r["d"], f"{location}.eq[{i}].d") for i, r in enumerate(data.get("eq", []))]
    return _checked(lambda: HPolyhedron(data["dim"], A, b, E, d), location)


def parse_v(data: dict, location: str = "$") -> VPolyhedron:
    validate(data, V_SCHEMA, location)
    pts = [parse_vector(p, f"{location}.points[{i}]") for i, p in enumerate(data["points"])]
    rays = [parse_vector(p, f"{location}.rays[{i}]") for i, p in enumerate(data.get("rays", []))]
    lin = [parse_vector(p, f"{location}.lineality[{i}]") for i, p in enumerate(data.get("lineality", []))]
    dim = data.get("dim") or (len((pts + rays + lin)[0]) if pts + rays + lin else None)
    if dim is None:
        raise SchemaError("an empty V-representation needs an explicit dim", location)
    return _checked(lambda: VPolyhedron(dim, pts, rays, lin), location)


def parse_set(data: Any, location: str = "$") -> HPolyhedron | VPolyhedron:
    if not isinstance(data, dict):
        raise SchemaError("expected an object", location)
    if "points" in data:
        return parse_v(data, location)
    return parse_h(data, location)


def parse_function(data: Any, location: str = "$") -> MaxAffineFunction:
    validate(data, FUNCTION_SCHEMA, location)
    pieces = [
        (parse_vector(p["a"], f"{location}.pieces[{i}].a"), parse_rat(p["b"], f"{location}.pieces[{i}].b"))
        for i, p in enumerate(data["pieces"])
    ]
    dom = data.get("domain")
    domain = parse_h(dom, f"{location}.domain") if dom is not None else None
    return _checked(lambda: MaxAffineFunction(data["n"], pieces, domain), location)


def parse_map(data: Any, location: str = "$") -> PolyhedralMap:
    validate(data, MAP_SCHEMA, location)
    graph = parse_h(data["graph"], f"{location}.graph")
    return _checked(lambda: PolyhedralMap(data["n"], data["p"], graph), location)


def parse_affine(data: Any, location: str = "$") -> AffineMap:
    validate(data, AFFINE_SCHEMA, location)
    A = [parse_vector(r, f"{location}.A[{i}]") for i, r in enumerate(data["A"])]
    b = parse_vector(data["b"], f"{location}.b") if "b" in data else None
    return _checked(lambda: AffineMap(A, b), location)


# ---------------------------------------------------------------------------
# encoding


def enc_rat(x) -> Any:
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    x = Fraction(x)
    return int(x) if x.denominator == 1 else fmt(x)


def enc_vector(v) -> list:
    return [enc_rat(c) for c in v]


def h_to_json(P: HPolyhedron) -> dict:
    return {
        "dim": P.dim,
        "ineq": [{"a": enc_vector(a), "b": enc_rat(b)} for a, b in zip(P.A, P.b)],
        "eq": [{"e": enc_vector(e), "d": enc_rat(d)} for e, d in zip(P.E, P.d)],
    }


def v_to_json(V: VPolyhedron) -> dict:
    return {
        "dim": V.dim,
        "points": [enc_vector(p) for p in V.points],
        "rays": [enc_vector(r) for r in V.rays],
        "lineality": [enc_vector(l) for l in V.lineality],
    }


def function_to_json(f: MaxAffineFunction) -> dict:
    return {
        "n": f.n,
        "pieces": [{"a": enc_vector(a), "b": enc_rat(b)} for a, b in f.pieces],
        "domain": h_to_json(f.domain),
    }


def map_to_json(F: PolyhedralMap) -> dict:
    return {"n": F.n, "p": F.p, "graph": h_to_json(F.graph)}


def to_jsonable(obj: Any) -> Any:
    """Generic encoder for reports, certificates and their contents."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, Fraction)) or (isinstance(obj, float) and math.isinf(obj)):
        return enc_rat(obj)
    if isinstance(obj, HPolyhedron):
        return h_to_json(obj)
    if isinstance(obj, VPolyhedron):
        return v_to_json(obj)
    if isinstance(obj, MaxAffineFunction):
        return function_to_json(obj)
    if isinstance(obj, PolyhedralMap):
        return map_to_json(obj)
    if isinstance(obj, Cone):
        return {"dim": obj.dim, "generators": [enc_vector(g) for g in obj.generators],
                "lineality": [enc_vector(l) for l in obj.lineality]}
    if isinstance(obj, RuleReport):
        return {
            "rule": obj.rule,
            "verdict": obj.verdict,
            "qualification_holds": obj.qualification_holds,
            "lhs": v_to_json(obj.lhs),
            "rhs": v_to_json(obj.rhs),
            "witness": None if obj.witness is None else enc_vector(obj.witness),
            "details": to_jsonable(obj.details),
        }
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True)

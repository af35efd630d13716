"""Definition-level oracles, seeded instance generation, and the rule fuzzer.

The oracles here deliberately avoid the normal-cone machinery used by the
engine: each one asks a single LP the question posed by the definition.
"""
from __future__ import annotations

import random
from itertools import product as iproduct
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .exact import Optimal, RatVector, add, inner, lp_solve, neg, sub, vec, zeros
from .normals import (
    ContinuityHypothesisUnverifiable,
    MaxAffineFunction,
    PointOutsideDomain,
    RuleReport,
    chain_rule_affine,
    intersection_rule,
    max_function,
    max_rule,
    subdifferential,
    sum_function,
    sum_rule,
)
from .coderivative import (
    BasePointInvalid,
    NoResidualPoint,
    PolyhedralMap,
    UnboundedSubdifferential,
    ValueUnattained,
    coderivative_chain,
    coderivative_intersect,
    coderivative_sum,
    compose_map,
    componentwise_chain,
    domain_normal,
    marginal_epigraph,
    optimal_value_point,
    optimal_value_subdiff,
    preimage_normal,
    solution_map,
    solution_map_coderivative,
    sum_map,
)
from .polyhedron import (
    AffineMap,
    HPolyhedron,
    VPolyhedron,
    dd_convert,
    dd_convert_back,
    dim_cap,
    intersect,
    project_coords,
    ri_intersection_nonempty,
    subset,
)
from .separation import PointOutsideSet, check_basic_qc

RULES = (
    "intersection",
    "sum",
    "chain",
    "max",
    "optimal-value",
    "componentwise",
    "preimage",
    "cod-sum",
    "cod-chain",
    "cod-intersect",
    "domain",
    "solution-map",
)

# errors that mean the generated instance does not meet a rule's hypotheses
VACUOUS = (
    PointOutsideDomain,
    PointOutsideSet,
    ValueUnattained,
    NoResidualPoint,
    BasePointInvalid,
    ContinuityHypothesisUnverifiable,
    UnboundedSubdifferential,
)


# ---------------------------------------------------------------------------
# definitional oracles


def oracle_normal_membership(v: Sequence[Fraction], P: HPolyhedron, x: Sequence[Fraction]) -> bool:
    """Whether ``<v, y - x> <= 0`` for every y in P, decided by one LP."""
    v, x = vec(v), vec(x)
    if not P.contains(x):
        raise PointOutsideSet("reference point lies outside the set")
    out = lp_solve(v, P, "max")
    return isinstance(out, Optimal) and out.value == inner(v, x)


def oracle_subgradient_epi(v: Sequence[Fraction], epi: HPolyhedron, x: Sequence[Fraction], fx: Fraction) -> bool:
    """Whether ``t - <v, y> >= fx - <v, x>`` over the epigraph ``epi``."""
    v, x = vec(v), vec(x)
    out = lp_solve(neg(v) + (Fraction(1),), epi, "min")
    return isinstance(out, Optimal) and out.value == fx - inner(v, x)


def oracle_subgradient(v: Sequence[Fraction], f: MaxAffineFunction, x: Sequence[Fraction]) -> bool:
    x = vec(x)
    if not f.in_domain(x):
        raise PointOutsideDomain("reference point lies outside the domain")
    return oracle_subgradient_epi(v, f.epigraph(), x, f.value(x))


def closed_form_subdiff(f: MaxAffineFunction, x: Sequence[Fraction]) -> VPolyhedron:
    """Hull of the active gradients plus the normal cone of the domain."""
    x = vec(x)
    D = f.domain
    if not D.contains(x):
        raise PointOutsideDomain("reference point lies outside the domain")
    vals = [inner(a, x) + b for a, b in f.pieces]
    top = max(vals)
    grads = [a for (a, _), val in zip(f.pieces, vals) if val == top]
    rays = [a for a, h in zip(D.A, D.b) if inner(a, x) == h]
    return VPolyhedron(f.n, grads, rays, list(D.E))


def probe_points(V: VPolyhedron, rng: random.Random, samples: int = 20) -> list[RatVector]:
    """Rational points from a box around the generators of V."""
    gens = list(V.points) + [add(V.points[0], r) for r in list(V.rays) + list(V.lineality)]
    gens += [sub(V.points[0], l) for l in V.lineality]
    lo = [min(g[i] for g in gens) - 1 for i in range(V.dim)]
    hi = [max(g[i] for g in gens) + 1 for i in range(V.dim)]
    out = []
    for _ in range(samples):
        out.append(tuple(l + (h - l) * Fraction(rng.randint(0, 8), 8) for l, h in zip(lo, hi)))
    return out


# ---------------------------------------------------------------------------
# instance generation


@dataclass(frozen=True)
class InstanceSpec:
    seed: int
    dims: tuple = (3, 3, 3)
    max_pieces: int = 3
    max_offsets: int = 3
    coef: int = 4
    qualified: bool = True


def _rng(seed: int, trial: int = 0) -> random.Random:
    return random.Random(f"convexcalc:{seed}:{trial}")


def _num(rng: random.Random, bound: int) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.choice((1, 1, 1, 2)))


def _ivec(rng: random.Random, n: int, bound: int) -> RatVector:
    return tuple(Fraction(rng.randint(-bound, bound)) for _ in range(n))


def _combo(rng: random.Random, basis: list, n: int, bound: int = 2) -> RatVector:
    out = zeros(n)
    for b in basis:
        c = rng.randint(-bound, bound)
        out = tuple(o + c * bi for o, bi in zip(out, b))
    return out


def gen_around(rng: random.Random, n: int, anchor: RatVector, spec: InstanceSpec, rays: bool = True) -> VPolyhedron:
    """A polyhedron whose relative interior contains ``anchor``.

    ``anchor`` is a strictly positive combination of every generator, which
    places it in the relative interior.
    """
    s = n if rng.random() < 0.7 else rng.randint(0, n)
    basis = [_ivec(rng, n, 2) for _ in range(s)]
    k = rng.randint(1, spec.max_offsets)
    offsets = [_combo(rng, basis, n) for _ in range(k)]
    ray_list, lin = [], []
    if rays and basis and rng.random() < 0.3:
        ray_list.append(_combo(rng, basis, n))
    if rays and basis and rng.random() < 0.15:
        lin.append(rng.choice(basis))
    total = zeros(n)
    for d in offsets + ray_list:
        total = add(total, d)
    points = [add(anchor, d) for d in offsets] + [sub(anchor, total)]
    return VPolyhedron(n, points, ray_list, lin)


def gen_through(rng: random.Random, n: int, x: RatVector, spec: InstanceSpec, rays: bool = True) -> VPolyhedron:
    """A polyhedron with ``x`` among its generating points (no ri guarantee)."""
    k = rng.randint(1, spec.max_offsets)
    points = [x] + [add(x, _ivec(rng, n, 2)) for _ in range(k)]
    ray_list = [_ivec(rng, n, 2)] if rays and rng.random() < 0.3 else []
    return VPolyhedron(n, points, ray_list)


def _family(rng, n: int, m: int, spec: InstanceSpec, rays: bool = True) -> tuple[list[HPolyhedron], RatVector]:
    if spec.qualified:
        anchor = _ivec(rng, n, 2)
        sets = [dd_convert_back(gen_around(rng, n, anchor, spec, rays)) for _ in range(m)]
        pts = list(dd_convert(intersect(*sets)).points) + [anchor]
        return sets, rng.choice(pts)
    x = _ivec(rng, n, 2)
    return [dd_convert_back(gen_through(rng, n, x, spec, rays)) for _ in range(m)], x


def _pieces_tied(rng, n: int, x: RatVector, spec: InstanceSpec, nonneg: bool = False) -> list:
    """Pieces with a random subset active at x (at least one)."""
    k = rng.randint(1, spec.max_pieces)
    level = _num(rng, 2)
    out = []
    for i in range(k):
        a = tuple(Fraction(rng.randint(0, 3)) for _ in range(n)) if nonneg else _ivec(rng, n, 3)
        drop = 0 if i == 0 or rng.random() < 0.6 else rng.randint(1, 3)
        out.append((a, level - inner(a, x) - drop))
    return out


def _pick_dims(rng, rule: str, caps: Sequence[int]) -> tuple[int, int, int]:
    cap = dim_cap()
    while True:
        n, p, q = (rng.randint(1, c) for c in caps)
        lifted = {
            "optimal-value": n + p + 1,
            "cod-sum": n + 2 * p,
            "cod-chain": n + p + q,
            "solution-map": n + p + q,
        }.get(rule, n + p)
        if lifted <= cap:
            return n, p, q


def gen_instance(spec: InstanceSpec, kind: str, trial: int = 0) -> dict:
    """Deterministic instance for the named rule from ``(seed, trial)``."""
    rng = _rng(spec.seed, trial)
    n, p, q = _pick_dims(rng, kind, spec.dims)
    inst: dict = {"rule": kind, "dims": (n, p, q)}
    if kind == "intersection":
        sets, x = _family(rng, n, rng.randint(2, 3), spec)
        inst.update(sets=sets, point=x)
    elif kind == "sum":
        doms, x = _family(rng, n, rng.randint(2, 3), spec)
        fs = [MaxAffineFunction(n, _pieces_tied(rng, n, x, spec), D if rng.random() < 0.7 else None) for D in doms]
        inst.update(functions=fs, point=x)
    elif kind == "chain":
        anchor = _ivec(rng, p, 2)
        dom = dd_convert_back(gen_around(rng, p, anchor, spec))
        A = [_ivec(rng, n, 2) for _ in range(p)]
        x0 = _ivec(rng, n, 2)
        if not spec.qualified:
            anchor = dd_convert(dom).points[0]
        b = sub(anchor, tuple(inner(r, x0) for r in A))
        B = AffineMap(A, b)
        pts = list(dd_convert(B.preimage(dom)).points) + [x0]
        x = rng.choice(pts)
        f = MaxAffineFunction(p, _pieces_tied(rng, p, B(x), spec), dom)
        inst.update(function=f, map=B, point=x)
    elif kind == "max":
        x = _ivec(rng, n, 2)
        fs = []
        for _ in range(rng.randint(1, 3)):
            dom = None
            if rng.random() < 0.3:
                dom = HPolyhedron.box([c - 1 for c in x], [c + 2 for c in x])
            fs.append(MaxAffineFunction(n, _pieces_tied(rng, n, x, spec), dom))
        inst.update(functions=fs, point=x)
    elif kind == "optimal-value":
        anchor = _ivec(rng, n + p, 2)
        gph = dd_convert_back(gen_around(rng, n + p, anchor, spec, rays=False))
        dom = dd_convert_back(gen_around(rng, n + p, anchor, spec)) if rng.random() < 0.3 else None
        pts = list(dd_convert(gph if dom is None else intersect(gph, dom)).points) + [anchor]
        base = rng.choice(pts)
        if not spec.qualified:
            base = pts[0]
            dom = dd_convert_back(gen_through(rng, n + p, base, spec))
        phi = MaxAffineFunction(n + p, _pieces_tied(rng, n + p, base, spec), dom)
        inst.update(function=phi, map=PolyhedralMap(n, p, gph), point=base[:n])
    elif kind == "componentwise":
        x = _ivec(rng, n, 2)
        fs = [MaxAffineFunction(n, _pieces_tied(rng, n, x, spec)) for _ in range(p)]
        y = tuple(f.value(x) for f in fs)
        g = MaxAffineFunction(p, _pieces_tied(rng, p, y, spec, nonneg=True))
        inst.update(outer=g, inner=fs, point=x)
    elif kind == "preimage":
        anchor = _ivec(rng, n + p, 2)
        gph = dd_convert_back(gen_around(rng, n + p, anchor, spec))
        theta = dd_convert_back(gen_around(rng, p, anchor[n:], spec))
        if not spec.qualified:
            theta = dd_convert_back(gen_through(rng, p, anchor[n:], spec))
        lifted = intersect(gph, theta.lift(n + p, range(n, n + p)))
        base = rng.choice(list(dd_convert(lifted).points) + [anchor])
        inst.update(map=PolyhedralMap(n, p, gph), target=theta, point=base[:n], value=base[n:])
    elif kind == "cod-sum":
        ax = _ivec(rng, n, 2)
        b1, b2 = _ivec(rng, p, 2), _ivec(rng, p, 2)
        F1 = PolyhedralMap(n, p, dd_convert_back(gen_around(rng, n + p, ax + b1, spec)))
        F2 = PolyhedralMap(n, p, dd_convert_back(gen_around(rng, n + p, ax + b2, spec)))
        S = sum_map(F1, F2)
        base = rng.choice(list(dd_convert(S.graph).points) + [ax + add(b1, b2)])
        inst.update(maps=(F1, F2), point=base[:n], value=base[n:], direction=_ivec(rng, p, 2))
    elif kind == "cod-chain":
        a, b, c = _ivec(rng, n, 2), _ivec(rng, p, 2), _ivec(rng, q, 2)
        F = PolyhedralMap(n, p, dd_convert_back(gen_around(rng, n + p, a + b, spec)))
        G = PolyhedralMap(p, q, dd_convert_back(gen_around(rng, p + q, b + c, spec)))
        GF = compose_map(F, G)
        base = rng.choice(list(dd_convert(GF.graph).points) + [a + c])
        inst.update(maps=(F, G), point=base[:n], value=base[n:], direction=_ivec(rng, q, 2))
    elif kind == "cod-intersect":
        sets, base = _family(rng, n + p, 2, spec)
        inst.update(
            maps=tuple(PolyhedralMap(n, p, G) for G in sets),
            point=base[:n],
            value=base[n:],
            direction=_ivec(rng, p, 2),
        )
    elif kind == "domain":
        anchor = _ivec(rng, n + p, 2)
        F = PolyhedralMap(n, p, dd_convert_back(gen_around(rng, n + p, anchor, spec)))
        x = rng.choice(list(dd_convert(F.dom()).points) + [anchor[:n]])
        inst.update(map=F, point=x)
    elif kind == "solution-map":
        m = n + p
        a, z = _ivec(rng, m, 2), _ivec(rng, q, 2)
        F = PolyhedralMap(m, q, dd_convert_back(gen_around(rng, m + q, a + z, spec)))
        G = PolyhedralMap(m, q, dd_convert_back(gen_around(rng, m + q, a + neg(z), spec)))
        S = solution_map(F, G, n)
        base = rng.choice(list(dd_convert(S.graph).points) + [a])
        inst.update(maps=(F, G), point=base[:n], value=base[n:], direction=_ivec(rng, p, 2))
    else:
        raise ValueError(f"unknown instance kind {kind!r}")
    return inst


# ---------------------------------------------------------------------------
# rule verification


def run_rule(inst: dict) -> RuleReport:
    kind = inst["rule"]
    x = inst["point"]
    if kind == "intersection":
        return intersection_rule(inst["sets"], x)
    if kind == "sum":
        return sum_rule(inst["functions"], x)
    if kind == "chain":
        return chain_rule_affine(inst["function"], inst["map"], x)
    if kind == "max":
        return max_rule(inst["functions"], x)
    if kind == "optimal-value":
        return optimal_value_subdiff(inst["function"], inst["map"], x)
    if kind == "componentwise":
        return componentwise_chain(inst["outer"], inst["inner"], x)
    if kind == "preimage":
        return preimage_normal(inst["map"], inst["target"], x, inst["value"])
    if kind == "cod-sum":
        return coderivative_sum(*inst["maps"], x, inst["value"], inst["direction"])
    if kind == "cod-chain":
        return coderivative_chain(*inst["maps"], x, inst["value"], inst["direction"])
    if kind == "cod-intersect":
        return coderivative_intersect(*inst["maps"], x, inst["value"], inst["direction"])
    if kind == "domain":
        return domain_normal(inst["map"], x)
    if kind == "solution-map":
        return solution_map_coderivative(*inst["maps"], x, inst["value"], inst["direction"])
    raise ValueError(f"unknown rule {kind!r}")


def _members(V: VPolyhedron) -> list[RatVector]:
    """Points of V together with one step along every ray and lineality direction."""
    if V.is_empty:
        return []
    p0 = V.points[0]
    out = list(V.points)
    out += [add(p0, r) for r in V.rays]
    out += [add(p0, l) for l in V.lineality] + [sub(p0, l) for l in V.lineality]
    return out


def lhs_oracle(inst: dict) -> Callable[[RatVector], bool]:
    """Definitional membership test for the left-hand side of the rule."""
    kind = inst["rule"]
    x = vec(inst["point"])
    if kind == "intersection":
        P = intersect(*inst["sets"])
        return lambda v: oracle_normal_membership(v, P, x)
    if kind in ("sum", "max", "chain", "componentwise"):
        if kind == "sum":
            f = sum_function(inst["functions"])
        elif kind == "max":
            f = max_function(inst["functions"])
        elif kind == "chain":
            f = inst["function"].compose(inst["map"])
        else:
            f = _componentwise_function(inst["outer"], inst["inner"])
        return lambda v: oracle_subgradient(v, f, x)
    if kind == "optimal-value":
        phi, F = inst["function"], inst["map"]
        epi = marginal_epigraph(phi, F)
        _, mu = optimal_value_point(phi, F, x)
        return lambda v: oracle_subgradient_epi(v, epi, x, mu)
    if kind == "preimage":
        F, theta = inst["map"], inst["target"]
        n, p = F.n, F.p
        pre = dd_convert_back(project_coords(intersect(F.graph, theta.lift(n + p, range(n, n + p))), range(n)))
        return lambda v: oracle_normal_membership(v, pre, x)
    if kind == "domain":
        D = inst["map"].dom()
        return lambda v: oracle_normal_membership(v, D, x)
    y, w = vec(inst["value"]), vec(inst["direction"])
    if kind == "cod-sum":
        M = sum_map(*inst["maps"])
    elif kind == "cod-chain":
        M = compose_map(*inst["maps"])
    elif kind == "cod-intersect":
        F1, F2 = inst["maps"]
        M = PolyhedralMap(F1.n, F1.p, intersect(F1.graph, F2.graph))
    else:
        F, G = inst["maps"]
        M = solution_map(F, G, len(x))
    return lambda u: oracle_normal_membership(vec(u) + neg(w), M.graph, x + y)


def _componentwise_function(g: MaxAffineFunction, fs: Sequence[MaxAffineFunction]) -> MaxAffineFunction:
    """Independent expansion of ``g(f_1, ..., f_p)`` by brute force over pieces."""
    n = fs[0].n
    pieces = []
    for c, c0 in g.pieces:
        for combo in iproduct(*(f.pieces for f in fs)):
            a = zeros(n)
            b = c0
            for ci, (ai, bi) in zip(c, combo):
                a = tuple(s + ci * t for s, t in zip(a, ai))
                b += ci * bi
            pieces.append((a, b))
    return MaxAffineFunction(n, pieces)


@dataclass
class TrialResult:
    trial: int
    qualified: bool
    verdict: str | None
    oracle_ok: bool
    inclusion_ok: bool | None = None
    skipped: str | None = None
    witness: RatVector | None = None


def verify_rule(inst: dict, trial: int = 0) -> TrialResult:
    """Run the rule and check every emitted left-hand generator with the oracle."""
    try:
        rep = run_rule(inst)
    except VACUOUS as exc:
        return TrialResult(trial, False, None, True, skipped=f"{type(exc).__name__}: {exc}")
    member = lhs_oracle(inst)
    ok = all(member(v) for v in _members(rep.lhs))
    inclusion = None
    if inst["rule"] in ("intersection", "sum", "optimal-value"):
        inclusion = subset(rep.rhs, rep.lhs)
    return TrialResult(trial, rep.qualification_holds, rep.verdict, ok, inclusion, None, rep.witness)


@dataclass
class FuzzReport:
    rule: str
    trials: int
    qualified_trials: int
    equal_count: int
    skipped: int = 0
    oracle_failures: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    inclusion_failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.equal_count == self.qualified_trials
            and not self.oracle_failures
            and not self.inclusion_failures
        )


def run_fuzz(rule: str, seed: int, trials: int, dims: Sequence[int] = (3, 3, 3), qualified: bool = True) -> FuzzReport:
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}")
    spec = InstanceSpec(seed, tuple(dims), qualified=qualified)
    report = FuzzReport(rule, trials, 0, 0)
    for t in range(trials):
        res = verify_rule(gen_instance(spec, rule, t), t)
        if res.skipped:
            report.skipped += 1
            continue
        if not res.oracle_ok:
            report.oracle_failures.append(t)
        if res.inclusion_ok is False:
            report.inclusion_failures.append(t)
        if res.qualified:
            report.qualified_trials += 1
            if res.verdict == "Equal":
                report.equal_count += 1
            else:
                report.failures.append({"trial": t, "verdict": res.verdict, "witness": res.witness})
    return report


def qc_strictness_scan(seed: int, trials: int, dims: Sequence[int] = (3, 3, 3)) -> list[int]:
    """Trials where the basic condition holds but the ri condition fails."""
    bad = []
    for t in range(trials):
        for qualified in (True, False):
            spec = InstanceSpec(seed, tuple(dims), qualified=qualified)
            inst = gen_instance(spec, "intersection", t)
            P1, P2 = inst["sets"][:2]
            x = inst["point"]
            if check_basic_qc(P1, P2, x) and not ri_intersection_nonempty(P1, P2):
                bad.append(t)
    return bad

"""Polyhedral set-valued maps, coderivatives, and the rules built on them.

Unions over infinite index sets are never sampled.  Each right-hand side is
computed as a slice of a Minkowski sum of (lifted) normal cones, which is
exactly the set the union describes.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Sequence

from .exact import Infeasible, Optimal, Unbounded, RatVector, add, lp_solve, scale, vec, zeros
from .normals import (
    Cone,
    MaxAffineFunction,
    PointOutsideDomain,
    RuleReport,
    _check_pieces,
    make_report,
    normal_cone,
    subdifferential,
    subdifferential_from_epigraph,
)
from .polyhedron import (
    AffineMap,
    HPolyhedron,
    VPolyhedron,
    dd_convert,
    dd_convert_back,
    intersect,
    linear_image,
    minkowski_sum,
    project_coords,
    ri_contains,
    ri_intersection_nonempty,
    ri_meet,
    ri_point,
    set_equal,
)


class PointOutsideGraph(ValueError):
    pass


class BasePointInvalid(ValueError):
    pass


class ValueUnattained(ValueError):
    pass


class NoResidualPoint(ValueError):
    pass


class MonotonicityUncertified(ValueError):
    pass


class UnboundedSubdifferential(ValueError):
    pass


@dataclass(frozen=True)
class PolyhedralMap:
    """``F: R^n => R^p`` given by its graph, a polyhedron in R^(n+p)."""

    n: int
    p: int
    graph: HPolyhedron

    def __post_init__(self):
        if self.graph.dim != self.n + self.p:
            raise ValueError(f"graph of dimension {self.graph.dim} for a map R^{self.n} => R^{self.p}")

    @classmethod
    def from_affine(cls, B: AffineMap) -> "PolyhedralMap":
        return cls(B.n, B.p, B.graph())

    @classmethod
    def constant(cls, n: int, P: HPolyhedron) -> "PolyhedralMap":
        return cls(n, P.dim, P.lift(n + P.dim, range(n, n + P.dim)))

    def dom(self) -> HPolyhedron:
        return dd_convert_back(project_coords(self.graph, range(self.n)))

    def values(self, x: Sequence[Fraction]) -> HPolyhedron:
        x = vec(x)
        return self.graph.substitute({i: xi for i, xi in enumerate(x)})

    def contains(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
        return self.graph.contains(vec(x) + vec(y))


def _slice(V: VPolyhedron, fixed: dict) -> VPolyhedron:
    """``{z | (z, fixed coords) in V}`` in the remaining coordinates."""
    return dd_convert(dd_convert_back(V).substitute(fixed))


def _lift_cone(C: Cone, total: int, coords: Sequence[int], signs: Sequence[int] | None = None) -> Cone:
    """Place the cone's coordinates at ``coords`` (optionally sign-flipped) in R^total."""
    signs = signs or [1] * C.dim

    def place(v):
        out = [Fraction(0)] * total
        for c, s, a in zip(coords, signs, v):
            out[c] += s * a
        return out

    return Cone(total, [place(g) for g in C.generators], [place(l) for l in C.lineality])


def _fix(start: int, values: Sequence[Fraction]) -> dict:
    return {start + j: v for j, v in enumerate(values)}


def coderivative(F: PolyhedralMap, x: Sequence[Fraction], y: Sequence[Fraction], v: Sequence[Fraction]) -> VPolyhedron:
    """``{u | (u, -v) in N((x, y); gph F)}``, possibly empty."""
    x, y, v = vec(x), vec(y), vec(v)
    if len(v) != F.p:
        raise ValueError("direction must live in the output space")
    base = x + y
    if not F.graph.contains(base):
        raise PointOutsideGraph("base point is not on the graph")
    C = normal_cone(F.graph, base)
    return _slice(C.to_vpoly(), _fix(F.n, [-c for c in v]))


def _vertices_and_ri(P: HPolyhedron) -> list[RatVector]:
    """All points of the V-representation plus one relative-interior point."""
    pts = list(dd_convert(P).points)
    r = ri_point(P).point
    if r not in pts:
        pts.append(r)
    return pts


def _intersect_terms(terms: Sequence[VPolyhedron]) -> VPolyhedron:
    return dd_convert(intersect(*(dd_convert_back(T) for T in terms)))


def _all_coincide(terms: Sequence[VPolyhedron]) -> bool:
    return all(set_equal(terms[0], T) for T in terms[1:])


def domain_normal(F: PolyhedralMap, x: Sequence[Fraction]) -> RuleReport:
    x = vec(x)
    D = F.dom()
    if not D.contains(x):
        raise PointOutsideDomain("point lies outside the domain of the map")
    lhs = normal_cone(D, x).to_vpoly()
    zero = zeros(F.p)
    terms = [coderivative(F, x, y, zero) for y in dd_convert(F.values(x)).points]
    # the report compares against every term and keeps the first disagreement
    for T in terms:
        rep = make_report("domain", lhs, T, True)
        if not rep.equal:
            return RuleReport(rep.rule, rep.lhs, rep.rhs, True, rep.verdict, rep.witness, {"terms": len(terms)})
    return make_report("domain", lhs, terms[0], True, terms=len(terms))


def optimal_value_point(phi: MaxAffineFunction, F: PolyhedralMap, x: Sequence[Fraction]) -> tuple[RatVector, Fraction]:
    """A minimiser of ``phi(x, .)`` over ``F(x)`` and the optimal value."""
    x = vec(x)
    n, p = F.n, F.p
    fixed = _fix(0, x)
    # variables (y, t)
    epi = phi.epigraph().substitute(fixed)
    gph = F.values(x).lift(p + 1, range(p))
    sys = intersect(epi, gph)
    out = lp_solve([0] * p + [1], sys, "min")
    if isinstance(out, Infeasible):
        raise PointOutsideDomain("no feasible y at this point")
    if isinstance(out, Unbounded):
        raise ValueUnattained("optimal value is minus infinity")
    assert isinstance(out, Optimal)
    return out.point[:p], out.value


def marginal_epigraph(phi: MaxAffineFunction, F: PolyhedralMap) -> HPolyhedron:
    """``{(x, t) | t >= phi(x, y) for some y in F(x)}``, projected from (x, y, t)."""
    n, p = F.n, F.p
    total = n + p + 1
    lifted = intersect(phi.epigraph(), F.graph.lift(total, range(n + p)))
    return dd_convert_back(project_coords(lifted, list(range(n)) + [n + p]))


def optimal_value_subdiff(phi: MaxAffineFunction, F: PolyhedralMap, x: Sequence[Fraction]) -> RuleReport:
    """Subgradients of the marginal function against the coderivative formula.

    The left side is the subdifferential of the marginal function itself,
    taken from its projected epigraph.  The right side is the union over
    ``(u, v)`` in the subdifferential of phi of ``u + D*F(x, y)(v)``, which
    equals ``{w | (w, 0) in d phi(x, y) + N((x, y); gph F)}``.
    """
    x = vec(x)
    n, p = F.n, F.p
    if phi.n != n + p:
        raise ValueError("phi must be defined on the product space")
    y, mu = optimal_value_point(phi, F, x)
    lhs = subdifferential_from_epigraph(marginal_epigraph(phi, F), x, mu)
    S = minkowski_sum(subdifferential(phi, x + y), normal_cone(F.graph, x + y).to_vpoly())
    rhs = _slice(S, _fix(n, zeros(p)))
    qualified = ri_intersection_nonempty(phi.domain, F.graph)
    return make_report("optimal-value", lhs, rhs, qualified, y=y, value=mu)


def componentwise_chain(g: MaxAffineFunction, fs: Sequence[MaxAffineFunction], x: Sequence[Fraction]) -> RuleReport:
    x = vec(x)
    p = g.n
    if len(fs) != p:
        raise ValueError("need one inner function per argument of the outer function")
    for a, _ in g.pieces:
        if any(c < 0 for c in a):
            raise MonotonicityUncertified("outer function has a piece with a negative gradient entry")
    if not g.is_finite_everywhere() or not all(f.is_finite_everywhere() for f in fs):
        raise MonotonicityUncertified("monotonicity is certified only for functions finite everywhere")
    n = fs[0].n
    y = tuple(f.value(x) for f in fs)
    count = len(g.pieces)
    for f in fs:
        count *= len(f.pieces)
    _check_pieces(count)
    pieces = []
    for c, c0 in g.pieces:
        for combo in iproduct(*(f.pieces for f in fs)):
            a = zeros(n)
            b = c0
            for ci, (ai, bi) in zip(c, combo):
                a = add(a, scale(ci, ai))
                b += ci * bi
            pieces.append((a, b))
    composite = MaxAffineFunction(n, list(dict.fromkeys(pieces)))
    lhs = subdifferential(composite, x)
    G = subdifferential(g, y)
    Vs = [subdifferential(f, x) for f in fs]
    if not G.is_bounded or not all(V.is_bounded for V in Vs):
        raise UnboundedSubdifferential("vertex products need bounded subdifferentials")
    points = []
    for gamma in G.points:
        for combo in iproduct(*(V.points for V in Vs)):
            s = zeros(n)
            for gi, vi in zip(gamma, combo):
                s = add(s, scale(gi, vi))
            points.append(s)
    rhs = VPolyhedron(n, points)
    lam = tuple(v + 1 for v in y)
    qualified = ri_contains(g.domain, lam)
    return make_report("componentwise", lhs, rhs, qualified)


def preimage_normal(F: PolyhedralMap, Theta: HPolyhedron, x: Sequence[Fraction], y: Sequence[Fraction]) -> RuleReport:
    x, y = vec(x), vec(y)
    n, p = F.n, F.p
    if not F.contains(x, y) or not Theta.contains(y):
        raise BasePointInvalid("base point must lie on the graph with y in the target set")
    lifted = intersect(F.graph, Theta.lift(n + p, range(n, n + p)))
    pre = dd_convert_back(project_coords(lifted, range(n)))
    lhs = normal_cone(pre, x).to_vpoly()
    N_gph = normal_cone(F.graph, x + y)
    N_theta = _lift_cone(normal_cone(Theta, y), n + p, range(n, n + p))
    # (u, -v) in N_gph with v in N_theta  <=>  (u, 0) in N_gph + (0 x N_theta)
    rhs = _slice(Cone.sum(N_gph, N_theta).to_vpoly(), _fix(n, zeros(p)))
    to_y = AffineMap([[1 if j == n + i else 0 for j in range(n + p)] for i in range(p)])
    qualified = ri_meet([(F.graph, None), (Theta, to_y)], n + p) is not None
    return make_report("preimage", lhs, rhs, qualified)


def _coord_map(total: int, coords: Sequence[int], signs: Sequence[int] | None = None) -> AffineMap:
    signs = signs or [1] * len(coords)
    return AffineMap([[s if j == c else 0 for j in range(total)] for c, s in zip(coords, signs)])


def sum_map(F1: PolyhedralMap, F2: PolyhedralMap) -> PolyhedralMap:
    """``x => F1(x) + F2(x)``, projected from the lifted (x, y1, y2) graph."""
    n, p = F1.n, F1.p
    if (F2.n, F2.p) != (n, p):
        raise ValueError("maps must share input and output dimensions")
    total = n + 2 * p
    G1 = F1.graph.lift(total, range(n + p))
    G2 = F2.graph.lift(total, list(range(n)) + list(range(n + p, total)))
    V = dd_convert(intersect(G1, G2))
    A = [[1 if j == i else 0 for j in range(total)] for i in range(n)]
    A += [[1 if j in (n + i, n + p + i) else 0 for j in range(total)] for i in range(p)]
    return PolyhedralMap(n, p, dd_convert_back(linear_image(AffineMap(A), V)))


def coderivative_sum(F1: PolyhedralMap, F2: PolyhedralMap, x, y, v) -> RuleReport:
    """Coderivative of a sum against the intersection over all splittings of y.

    Every term at a relative-interior splitting is contained in the terms at
    the other splittings, so the intersection over the whole splitting set is
    reached by the vertices together with one relative-interior splitting.
    """
    x, y, v = vec(x), vec(y), vec(v)
    n, p = F1.n, F1.p
    # splitting set: y1 in F1(x), y - y1 in F2(x)
    V2 = F2.values(x)
    shifted = HPolyhedron(
        p,
        [[-a for a in r] for r in V2.A],
        [h - sum(a * yi for a, yi in zip(r, y)) for r, h in zip(V2.A, V2.b)],
        [[-a for a in r] for r in V2.E],
        [h - sum(a * yi for a, yi in zip(r, y)) for r, h in zip(V2.E, V2.d)],
    )
    S = intersect(F1.values(x), shifted)
    if dd_convert(S).is_empty:
        raise BasePointInvalid("y is not a value of the sum map at x")
    lhs = coderivative(sum_map(F1, F2), x, y, v)
    terms = []
    for y1 in _vertices_and_ri(S):
        y2 = tuple(a - b for a, b in zip(y, y1))
        terms.append(minkowski_sum(coderivative(F1, x, y1, v), coderivative(F2, x, y2, v)))
    rhs = _intersect_terms(terms)
    total = n + 2 * p
    qualified = ri_meet(
        [
            (F1.graph, _coord_map(total, range(n + p))),
            (F2.graph, _coord_map(total, list(range(n)) + list(range(n + p, total)))),
        ],
        total,
    ) is not None
    return make_report("cod-sum", lhs, rhs, qualified, splittings=len(terms), terms_coincide=_all_coincide(terms))


def compose_map(F: PolyhedralMap, G: PolyhedralMap) -> PolyhedralMap:
    n, p, q = F.n, F.p, G.p
    if G.n != p:
        raise ValueError("inner output dimension must match outer input dimension")
    total = n + p + q
    lifted = intersect(F.graph.lift(total, range(n + p)), G.graph.lift(total, range(n, total)))
    return PolyhedralMap(n, q, dd_convert_back(project_coords(lifted, list(range(n)) + list(range(n + p, total)))))


def coderivative_chain(F: PolyhedralMap, G: PolyhedralMap, x, z, w) -> RuleReport:
    x, z, w = vec(x), vec(z), vec(w)
    n, p, q = F.n, F.p, G.p
    total = n + p + q
    Gz = G.graph.substitute(_fix(p, z))
    M = intersect(F.values(x), Gz)
    if dd_convert(M).is_empty:
        raise BasePointInvalid("z is not a value of the composition at x")
    lhs = coderivative(compose_map(F, G), x, z, w)
    terms = []
    for y in _vertices_and_ri(M):
        NF = _lift_cone(normal_cone(F.graph, x + y), total, range(n + p))
        NG = _lift_cone(normal_cone(G.graph, y + z), total, range(n, total))
        # (u, -v) in NF and (v, -w) in NG  <=>  (u, 0, -w) in NF + NG
        fixed = _fix(n, zeros(p))
        fixed.update(_fix(n + p, [-c for c in w]))
        terms.append(_slice(Cone.sum(NF, NG).to_vpoly(), fixed))
    rhs = _intersect_terms(terms)
    qualified = ri_meet(
        [(F.graph, _coord_map(total, range(n + p))), (G.graph, _coord_map(total, range(n, total)))],
        total,
    ) is not None
    return make_report("cod-chain", lhs, rhs, qualified, intermediates=len(terms), terms_coincide=_all_coincide(terms))


def coderivative_intersect(F1: PolyhedralMap, F2: PolyhedralMap, x, y, v) -> RuleReport:
    x, y, v = vec(x), vec(y), vec(v)
    n, p = F1.n, F1.p
    if not F1.contains(x, y) or not F2.contains(x, y):
        raise BasePointInvalid("base point must lie on both graphs")
    both = PolyhedralMap(n, p, intersect(F1.graph, F2.graph))
    lhs = coderivative(both, x, y, v)
    N = Cone.sum(normal_cone(F1.graph, x + y), normal_cone(F2.graph, x + y))
    rhs = _slice(N.to_vpoly(), _fix(n, [-c for c in v]))
    qualified = ri_intersection_nonempty(F1.graph, F2.graph)
    return make_report("cod-intersect", lhs, rhs, qualified)


def residual_point(F: PolyhedralMap, G: PolyhedralMap, xy: Sequence[Fraction]) -> RatVector:
    """A z with ``z in F(x, y)`` and ``-z in G(x, y)``."""
    q = F.p
    sys = intersect(F.values(xy), G.values(xy).negated())
    out = lp_solve([0] * q, sys)
    if isinstance(out, Infeasible):
        raise NoResidualPoint("no z with z in F(x, y) and -z in G(x, y)")
    return out.point if isinstance(out, Optimal) else out.feasible_point


def _neg_output(G: PolyhedralMap) -> HPolyhedron:
    """Graph of ``-G``: ``{(x, -z) | (x, z) in gph G}``."""
    m = G.n
    signs = [1] * m + [-1] * G.p
    H = G.graph
    flip = lambda r: [s * a for s, a in zip(signs, r)]  # noqa: E731
    return HPolyhedron(H.dim, [flip(r) for r in H.A], H.b, [flip(r) for r in H.E], H.d)


def solution_map(F: PolyhedralMap, G: PolyhedralMap, n: int) -> PolyhedralMap:
    """``x => {y | 0 in F(x, y) + G(x, y)}`` with F, G defined on R^(n+p)."""
    m = F.n
    p = m - n
    lifted = intersect(F.graph, _neg_output(G))
    return PolyhedralMap(n, p, dd_convert_back(project_coords(lifted, range(m))))


def solution_map_coderivative(F: PolyhedralMap, G: PolyhedralMap, x, y, v) -> RuleReport:
    """Coderivative of the solution map of ``0 in F(x, y) + G(x, y)``.

    With ``R`` flipping the sign of the last block, the union over ``w`` of
    ``{u | (u, -v) in D*F(w) + D*G(w)}`` is the slice
    ``{u | (u, -v, 0) in N(gph F) + R N(gph G)}``.
    """
    x, y, v = vec(x), vec(y), vec(v)
    n = len(x)
    m, q = F.n, F.p
    if (G.n, G.p) != (m, q) or m != n + len(y):
        raise ValueError("F and G must map R^(n+p) to the same space")
    xy = x + y
    z = residual_point(F, G, xy)
    S = solution_map(F, G, n)
    lhs = coderivative(S, x, y, v)
    NF = normal_cone(F.graph, xy + z)
    NG = normal_cone(G.graph, xy + tuple(-c for c in z))
    RNG = _lift_cone(NG, m + q, range(m + q), [1] * m + [-1] * q)
    fixed = _fix(n, [-c for c in v])
    fixed.update(_fix(m, zeros(q)))
    rhs = _slice(Cone.sum(NF, RNG).to_vpoly(), fixed)
    qualified = ri_intersection_nonempty(F.graph, _neg_output(G))
    return make_report("solution-map", lhs, rhs, qualified, z=z)


__all__ = [
    "BasePointInvalid",
    "MonotonicityUncertified",
    "NoResidualPoint",
    "PointOutsideGraph",
    "PolyhedralMap",
    "UnboundedSubdifferential",
    "ValueUnattained",
    "coderivative",
    "coderivative_chain",
    "coderivative_intersect",
    "coderivative_sum",
    "componentwise_chain",
    "compose_map",
    "domain_normal",
    "marginal_epigraph",
    "optimal_value_point",
    "optimal_value_subdiff",
    "preimage_normal",
    "residual_point",
    "solution_map",
    "solution_map_coderivative",
    "sum_map",
]

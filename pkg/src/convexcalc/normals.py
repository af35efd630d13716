"""Normal cones, subdifferentials of max-affine functions, and their calculus rules."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Optional, Sequence

from .exact import (
    Optimal,
    RatVector,
    add,
    inner,
    lp_solve,
    neg,
    rat,
    scale,
    transpose,
    vec,
    zeros,
)
from .polyhedron import (
    AffineMap,
    HPolyhedron,
    VPolyhedron,
    as_h,
    as_v,
    convex_hull_union,
    find_outside,
    intersect,
    is_interior,
    linear_image,
    minkowski_sum,
    ri_intersection_nonempty,
    ri_meet,
    ri_point,
    subset,
)
from .separation import PointOutsideSet

PIECE_CAP = 10_000

EQUAL = "Equal"
LHS_SMALLER = "LhsStrictlySmaller"
RHS_SMALLER = "RhsStrictlySmaller"
INCOMPARABLE = "Incomparable"


class PointOutsideDomain(ValueError):
    pass


class ContinuityHypothesisUnverifiable(ValueError):
    pass


class PieceCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Cone:
    """``cone(generators) + span(lineality)`` with apex at the origin."""

    dim: int
    generators: tuple = ()
    lineality: tuple = ()

    def __post_init__(self):
        gens = tuple(vec(g) for g in self.generators if any(g))
        lin = tuple(vec(l) for l in self.lineality if any(l))
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "lineality", lin)

    def to_vpoly(self) -> VPolyhedron:
        return VPolyhedron(self.dim, [zeros(self.dim)], self.generators, self.lineality)

    def negated(self) -> "Cone":
        return Cone(self.dim, [neg(g) for g in self.generators], self.lineality)

    def is_trivial(self) -> bool:
        V = self.to_vpoly()
        return not V.rays and not V.lineality

    @staticmethod
    def sum(*cones: "Cone") -> "Cone":
        dim = cones[0].dim
        return Cone(
            dim,
            [g for C in cones for g in C.generators],
            [l for C in cones for l in C.lineality],
        )


@dataclass(frozen=True)
class MaxAffineFunction:
    """``x -> max_i <a_i, x> + b_i`` on ``domain``, and ``+inf`` outside it."""

    n: int
    pieces: tuple
    domain: Optional[HPolyhedron] = None

    def __post_init__(self):
        pieces = tuple((vec(a), rat(b)) for a, b in self.pieces)
        if not pieces:
            raise ValueError("a max-affine function needs at least one piece")
        for a, _ in pieces:
            if len(a) != self.n:
                raise ValueError(f"piece gradient of length {len(a)} for input dimension {self.n}")
        dom = self.domain if self.domain is not None else HPolyhedron.whole(self.n)
        if dom.dim != self.n:
            raise ValueError("domain dimension differs from input dimension")
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "domain", dom)

    @classmethod
    def indicator(cls, P: HPolyhedron) -> "MaxAffineFunction":
        return cls(P.dim, [(zeros(P.dim), 0)], P)

    @classmethod
    def affine(cls, a: Sequence, b=0) -> "MaxAffineFunction":
        a = vec(a)
        return cls(len(a), [(a, b)])

    def in_domain(self, x: Sequence[Fraction]) -> bool:
        return self.domain.contains(vec(x))

    def _check(self, x) -> RatVector:
        x = vec(x)
        if len(x) != self.n:
            raise ValueError(f"point of length {len(x)} for input dimension {self.n}")
        if not self.domain.contains(x):
            raise PointOutsideDomain("point lies outside the domain")
        return x

    def value(self, x: Sequence[Fraction]) -> Fraction:
        x = self._check(x)
        return max(inner(a, x) + b for a, b in self.pieces)

    def active_set(self, x: Sequence[Fraction]) -> frozenset:
        x = self._check(x)
        vals = [inner(a, x) + b for a, b in self.pieces]
        top = max(vals)
        return frozenset(i for i, v in enumerate(vals) if v == top)

    def epigraph(self) -> HPolyhedron:
        """``{(x, t) | <a_i, x> + b_i <= t, x in domain}`` in dimension n + 1."""
        n = self.n
        A = [list(a) + [-1] for a, _ in self.pieces]
        b = [-bi for _, bi in self.pieces]
        dom = self.domain.lift(n + 1, range(n))
        return HPolyhedron(n + 1, A + list(dom.A), b + list(dom.b), dom.E, dom.d)

    def is_finite_everywhere(self) -> bool:
        D = self.domain
        return all(not any(r) and h >= 0 for r, h in zip(D.A, D.b)) and all(
            not any(r) and h == 0 for r, h in zip(D.E, D.d)
        )

    def compose(self, B: AffineMap) -> "MaxAffineFunction":
        """``x -> f(B x)`` as a max-affine function on the domain of B."""
        if B.p != self.n:
            raise ValueError("affine map codomain differs from input dimension")
        At = transpose(B.A)
        pieces = [(tuple(inner(col, a) for col in At), inner(a, B.b) + bi) for a, bi in self.pieces]
        return MaxAffineFunction(B.n, pieces, B.preimage(self.domain))


@dataclass(frozen=True)
class RuleReport:
    rule: str
    lhs: VPolyhedron
    rhs: VPolyhedron
    qualification_holds: bool
    verdict: str
    witness: Optional[RatVector] = None
    details: dict = field(default_factory=dict, compare=False)

    @property
    def equal(self) -> bool:
        return self.verdict == EQUAL


def compare_sets(lhs, rhs) -> tuple[str, Optional[RatVector]]:
    """Verdict for two polyhedral sets with a witness from the symmetric difference."""
    l_in_r = subset(lhs, rhs)
    r_in_l = subset(rhs, lhs)
    if l_in_r and r_in_l:
        return EQUAL, None
    if l_in_r:
        w = find_outside(rhs, lhs)
        return LHS_SMALLER, w
    if r_in_l:
        w = find_outside(lhs, rhs)
        return RHS_SMALLER, w
    w = find_outside(lhs, rhs)
    return INCOMPARABLE, w


def make_report(rule: str, lhs, rhs, qualified: bool, **details) -> RuleReport:
    lhs, rhs = as_v(lhs), as_v(rhs)
    verdict, witness = compare_sets(lhs, rhs)
    return RuleReport(rule, lhs, rhs, qualified, verdict, witness, details)


# ---------------------------------------------------------------------------
# normal cones and subdifferentials


def normal_cone(P: HPolyhedron, x: Sequence[Fraction], verify: bool = True) -> Cone:
    """Active inequality normals as generators, equality normals as lineality."""
    x = vec(x)
    if not P.contains(x):
        raise PointOutsideSet("normal cone requested at a point outside the set")
    gens = [P.A[i] for i in P.active_rows(x) if any(P.A[i])]
    C = Cone(P.dim, gens, [e for e in P.E if any(e)])
    if verify:
        for g in C.generators:
            out = lp_solve(g, P, "max")
            if not (isinstance(out, Optimal) and out.value == inner(g, x)):
                raise ArithmeticError("emitted normal fails the definitional LP check")
    return C


def slice_epigraph_normals(C: Cone, n: int) -> VPolyhedron:
    """``{v | (v, -1) in C}`` for a cone of epigraph normals in R^(n+1)."""
    points, rays = [], []
    for g in C.generators:
        last = g[n]
        if last > 0:
            raise ArithmeticError("epigraph normal with positive vertical component")
        if last < 0:
            points.append(tuple(c / -last for c in g[:n]))
        else:
            rays.append(g[:n])
    lin = []
    for l in C.lineality:
        if l[n] != 0:
            raise ArithmeticError("epigraph lineality with nonzero vertical component")
        lin.append(l[:n])
    return VPolyhedron(n, points, rays, lin)


def subdifferential_from_epigraph(epi: HPolyhedron, x: Sequence[Fraction], fx: Fraction) -> VPolyhedron:
    x = vec(x)
    C = normal_cone(epi, x + (fx,))
    return slice_epigraph_normals(C, len(x))


def subdifferential(f: MaxAffineFunction, x: Sequence[Fraction]) -> VPolyhedron:
    """All subgradients at x, read off the normal cone to the epigraph."""
    x = vec(x)
    fx = f.value(x)
    return subdifferential_from_epigraph(f.epigraph(), x, fx)


def fermat_check(f: MaxAffineFunction, x: Sequence[Fraction]) -> bool:
    return subdifferential(f, x).contains(zeros(f.n))


# ---------------------------------------------------------------------------
# rules


def _require_common(Ps: Sequence[HPolyhedron], x: RatVector, err=PointOutsideSet) -> None:
    for P in Ps:
        if not P.contains(x):
            raise err("point lies outside one of the sets")


def intersection_rule(Ps: Sequence[HPolyhedron], x: Sequence[Fraction]) -> RuleReport:
    Ps = [as_h(P) for P in Ps]
    x = vec(x)
    _require_common(Ps, x)
    lhs = normal_cone(intersect(*Ps), x)
    rhs = Cone.sum(*(normal_cone(P, x) for P in Ps))
    qualified = ri_intersection_nonempty(*Ps)
    return make_report("intersection", lhs.to_vpoly(), rhs.to_vpoly(), qualified)


def _check_pieces(count: int) -> None:
    if count > PIECE_CAP:
        raise PieceCapExceeded(f"{count} pieces exceed the cap of {PIECE_CAP}")


def sum_function(fs: Sequence[MaxAffineFunction]) -> MaxAffineFunction:
    n = fs[0].n
    count = 1
    for f in fs:
        count *= len(f.pieces)
    _check_pieces(count)
    pieces = []
    for combo in iproduct(*(f.pieces for f in fs)):
        a = zeros(n)
        b = Fraction(0)
        for ai, bi in combo:
            a = add(a, ai)
            b += bi
        pieces.append((a, b))
    pieces = list(dict.fromkeys(pieces))
    return MaxAffineFunction(n, pieces, intersect(*(f.domain for f in fs)))


def max_function(fs: Sequence[MaxAffineFunction]) -> MaxAffineFunction:
    n = fs[0].n
    pieces = list(dict.fromkeys(p for f in fs for p in f.pieces))
    return MaxAffineFunction(n, pieces, intersect(*(f.domain for f in fs)))


def sum_rule(fs: Sequence[MaxAffineFunction], x: Sequence[Fraction]) -> RuleReport:
    x = vec(x)
    for f in fs:
        if not f.in_domain(x):
            raise PointOutsideDomain("point lies outside one of the domains")
    lhs = subdifferential(sum_function(fs), x)
    rhs = minkowski_sum(*(subdifferential(f, x) for f in fs))
    qualified = ri_intersection_nonempty(*(f.domain for f in fs))
    return make_report("sum", lhs, rhs, qualified)


def chain_rule_affine(f: MaxAffineFunction, B: AffineMap, x: Sequence[Fraction]) -> RuleReport:
    x = vec(x)
    y = B(x)
    if not f.in_domain(y):
        raise PointOutsideDomain("image point lies outside the domain")
    lhs = subdifferential(f.compose(B), x)
    adjoint = AffineMap(transpose(B.A, B.n))
    rhs = linear_image(adjoint, subdifferential(f, y))
    qualified = ri_meet([(f.domain, B)], B.n) is not None
    return make_report("chain", lhs, rhs, qualified)


def affine_graph_normal(B: AffineMap, x: Sequence[Fraction]) -> Cone:
    x = vec(x)
    return normal_cone(B.graph(), x + B(x))


def max_rule(fs: Sequence[MaxAffineFunction], x: Sequence[Fraction]) -> RuleReport:
    x = vec(x)
    for f in fs:
        if not f.in_domain(x):
            raise PointOutsideDomain("point lies outside one of the domains")
    for f in fs:
        if not is_interior(f.domain, x):
            raise ContinuityHypothesisUnverifiable("point is not interior to every domain")
    vals = [f.value(x) for f in fs]
    top = max(vals)
    active = [i for i, v in enumerate(vals) if v == top]
    lhs = subdifferential(max_function(fs), x)
    rhs = convex_hull_union(*(subdifferential(fs[i], x) for i in active))
    return make_report("max", lhs, rhs, True, active=active)


def subdiff_nonempty_on_ri(f: MaxAffineFunction) -> bool:
    x = ri_point(f.domain).point
    return not subdifferential(f, x).is_empty


def scale_function(c: Fraction, f: MaxAffineFunction) -> MaxAffineFunction:
    c = rat(c)
    if c < 0:
        raise ValueError("only nonnegative scalings keep convexity")
    return MaxAffineFunction(f.n, [(scale(c, a), c * b) for a, b in f.pieces], f.domain)

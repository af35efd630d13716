"""H- and V-representations of polyhedra and the operations between them.

Conversion uses the double description method on the homogenised cone, carried
out in integer arithmetic with the combinatorial adjacency test, so every
output is irredundant without extra LPs.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Union

from .exact import (
    DimensionMismatch,
    Infeasible,
    Optimal,
    RatVector,
    independent_rows,
    inner,
    is_zero,
    lp_solve,
    mat,
    matvec,
    neg,
    nullspace,
    primitive,
    rat,
    solve,
    vec,
)


class EmptySet(ValueError):
    pass


class DimensionCapExceeded(ValueError):
    pass


DEFAULT_DIM_CAP = 8


def dim_cap() -> int:
    return int(os.environ.get("CONVEXCALC_DIM_CAP", DEFAULT_DIM_CAP))


@dataclass(frozen=True)
class HPolyhedron:
    """``{x | A x <= b, E x = d}`` in dimension ``dim``."""

    dim: int
    A: tuple = ()
    b: tuple = ()
    E: tuple = ()
    d: tuple = ()

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        object.__setattr__(self, "A", mat(self.A))
        object.__setattr__(self, "b", vec(self.b))
        object.__setattr__(self, "E", mat(self.E))
        object.__setattr__(self, "d", vec(self.d))
        if len(self.A) != len(self.b) or len(self.E) != len(self.d):
            raise ValueError("row count and right-hand side length differ")
        for row in self.A + self.E:
            if len(row) != self.dim:
                raise DimensionMismatch(f"row of length {len(row)} in dimension {self.dim}")

    @classmethod
    def whole(cls, dim: int) -> "HPolyhedron":
        return cls(dim)

    @classmethod
    def point(cls, x: Sequence) -> "HPolyhedron":
        x = vec(x)
        n = len(x)
        E = [[1 if j == i else 0 for j in range(n)] for i in range(n)]
        return cls(n, E=E, d=x)

    @classmethod
    def box(cls, lo: Sequence, hi: Sequence) -> "HPolyhedron":
        n = len(lo)
        A, b = [], []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            A.append(e)
            b.append(hi[i])
            A.append([-v for v in e])
            b.append(-rat(lo[i]))
        return cls(n, A, b)

    def contains(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.dim:
            raise DimensionMismatch("point dimension differs from polyhedron dimension")
        return all(inner(a, x) <= bi for a, bi in zip(self.A, self.b)) and all(
            inner(e, x) == di for e, di in zip(self.E, self.d)
        )

    def active_rows(self, x: Sequence[Fraction]) -> list[int]:
        return [i for i, (a, bi) in enumerate(zip(self.A, self.b)) if inner(a, x) == bi]

    def lift(self, total: int, coords: Sequence[int]) -> "HPolyhedron":
        """Embed as ``{z in R^total | z[coords] in self}``."""
        if len(coords) != self.dim:
            raise DimensionMismatch("coordinate list must match polyhedron dimension")

        def place(row):
            out = [Fraction(0)] * total
            for c, a in zip(coords, row):
                out[c] += a
            return out

        return HPolyhedron(total, [place(r) for r in self.A], self.b, [place(r) for r in self.E], self.d)

    def negated(self) -> "HPolyhedron":
        return HPolyhedron(self.dim, [neg(r) for r in self.A], self.b, [neg(r) for r in self.E], self.d)

    def substitute(self, fixed: dict[int, Fraction]) -> "HPolyhedron":
        """Fix the given coordinates and return the slice in the remaining ones."""
        keep = [j for j in range(self.dim) if j not in fixed]

        def split(row, rhs):
            shift = sum((row[j] * v for j, v in fixed.items()), Fraction(0))
            return [row[j] for j in keep], rhs - shift

        A, b, E, d = [], [], [], []
        for row, rhs in zip(self.A, self.b):
            r, h = split(row, rhs)
            A.append(r)
            b.append(h)
        for row, rhs in zip(self.E, self.d):
            r, h = split(row, rhs)
            E.append(r)
            d.append(h)
        return HPolyhedron(len(keep), A, b, E, d)


@dataclass(frozen=True)
class VPolyhedron:
    """``conv(points) + cone(rays) + span(lineality)``; empty iff no points."""

    dim: int
    points: tuple = ()
    rays: tuple = ()
    lineality: tuple = ()

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        pts = _dedup(mat(self.points))
        rays = _dedup(primitive(r) for r in mat(self.rays) if not is_zero(r))
        lin = _dedup(primitive(r) for r in mat(self.lineality) if not is_zero(r))
        if not pts:
            rays, lin = (), ()
        for v in pts + rays + lin:
            if len(v) != self.dim:
                raise DimensionMismatch(f"generator of length {len(v)} in dimension {self.dim}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "lineality", lin)

    @property
    def is_empty(self) -> bool:
        return not self.points

    @property
    def is_bounded(self) -> bool:
        return not self.rays and not self.lineality

    @classmethod
    def empty(cls, dim: int) -> "VPolyhedron":
        return cls(dim)

    @classmethod
    def singleton(cls, x: Sequence) -> "VPolyhedron":
        x = vec(x)
        return cls(len(x), [x])

    def contains(self, x: Sequence[Fraction]) -> bool:
        """Membership by an LP over the generator weights."""
        x = vec(x)
        if len(x) != self.dim:
            raise DimensionMismatch("point dimension differs from polyhedron dimension")
        if self.is_empty:
            return False
        gens = list(self.points) + list(self.rays) + list(self.lineality)
        k, nr = len(self.points), len(self.rays)
        nv = len(gens)
        # variables: weights; equality rows sum w_j g_j = x and sum over points = 1
        E = [[g[i] for g in gens] for i in range(self.dim)]
        d = list(x)
        E.append([1] * k + [0] * (nv - k))
        d.append(1)
        A, b = [], []
        for j in range(k + nr):
            row = [0] * nv
            row[j] = -1
            A.append(row)
            b.append(0)
        P = HPolyhedron(nv, A, b, E, d)
        return not isinstance(lp_solve([0] * nv, P), Infeasible)


@dataclass(frozen=True)
class AffineMap:
    """``x -> A x + b`` from R^n to R^p."""

    A: tuple
    b: tuple = None

    def __post_init__(self):
        A = mat(self.A)
        if not A or not A[0]:
            raise ValueError("affine map needs a nonempty matrix")
        n = len(A[0])
        if any(len(r) != n for r in A):
            raise ValueError("ragged matrix")
        b = vec(self.b) if self.b is not None else (Fraction(0),) * len(A)
        if len(b) != len(A):
            raise DimensionMismatch("offset length differs from row count")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return len(self.A[0])

    @property
    def p(self) -> int:
        return len(self.A)

    def __call__(self, x: Sequence[Fraction]) -> RatVector:
        return tuple(v + c for v, c in zip(matvec(self.A, x), self.b))

    def linear(self, x: Sequence[Fraction]) -> RatVector:
        return matvec(self.A, x)

    def graph(self) -> HPolyhedron:
        """``{(x, y) | y = A x + b}``."""
        n, p = self.n, self.p
        E = []
        for i in range(p):
            E.append([-a for a in self.A[i]] + [1 if j == i else 0 for j in range(p)])
        return HPolyhedron(n + p, E=E, d=self.b)

    def preimage(self, P: HPolyhedron) -> HPolyhedron:
        """``{x | A x + b in P}``."""
        if P.dim != self.p:
            raise DimensionMismatch("affine map codomain differs from polyhedron dimension")
        At = list(zip(*self.A))

        def pull(row, rhs):
            return [inner(row, col) for col in At], rhs - inner(row, self.b)

        A, b, E, d = [], [], [], []
        for row, rhs in zip(P.A, P.b):
            r, h = pull(row, rhs)
            A.append(r)
            b.append(h)
        for row, rhs in zip(P.E, P.d):
            r, h = pull(row, rhs)
            E.append(r)
            d.append(h)
        return HPolyhedron(self.n, A, b, E, d)


@dataclass(frozen=True)
class RiCertificate:
    point: RatVector
    implicit_rows: frozenset
    slack: Fraction = field(default=Fraction(0))


def _dedup(vs: Iterable[RatVector]) -> tuple:
    seen = {}
    for v in vs:
        seen.setdefault(tuple(v), None)
    return tuple(seen)


# ---------------------------------------------------------------------------
# affine hull and relative interior


@lru_cache(maxsize=4096)
def implicit_equalities(P: HPolyhedron) -> frozenset:
    """Inequality rows that hold with equality on all of ``P``.

    Repeatedly maximises the total slack ``sum t_i`` (each ``t_i`` in [0, 1])
    over the rows not yet known to be slack; rows with ``t_i > 0`` in the
    optimum are slack somewhere, and a zero optimum proves the rest implicit.
    """
    n = P.dim
    undecided = list(range(len(P.A)))
    slack_rows: list[int] = []
    while True:
        k = len(undecided)
        nv = n + k
        A, b = [], []
        for idx, i in enumerate(undecided):
            row = list(P.A[i]) + [0] * k
            row[n + idx] = 1
            A.append(row)
            b.append(P.b[i])
            t = [0] * nv
            t[n + idx] = 1
            A.append(t)
            b.append(1)
            A.append([-v for v in t])
            b.append(0)
        for i in slack_rows:
            A.append(list(P.A[i]) + [0] * k)
            b.append(P.b[i])
        E = [list(e) + [0] * k for e in P.E]
        obj = [0] * n + [1] * k
        out = lp_solve(obj, HPolyhedron(nv, A, b, E, P.d), "max")
        if isinstance(out, Infeasible):
            raise EmptySet("polyhedron is empty")
        assert isinstance(out, Optimal)
        if out.value == 0:
            return frozenset(undecided)
        t = out.point[n:]
        newly = [i for i, ti in zip(undecided, t) if ti > 0]
        slack_rows.extend(newly)
        undecided = [i for i, ti in zip(undecided, t) if ti == 0]
        if not undecided:
            return frozenset()


def is_empty(P: HPolyhedron) -> bool:
    return isinstance(lp_solve([0] * P.dim, P), Infeasible)


def affine_hull(P: HPolyhedron) -> HPolyhedron:
    """``aff(P)`` as a system of equalities only."""
    impl = sorted(implicit_equalities(P))
    E = list(P.E) + [P.A[i] for i in impl]
    d = list(P.d) + [P.b[i] for i in impl]
    return HPolyhedron(P.dim, E=E, d=d)


def _ri_lp(parts: Sequence[tuple[HPolyhedron, "AffineMap | None"]], nvars: int):
    """max t s.t. each M z + c lies in its polyhedron with slack t on non-implicit rows."""
    A, b, E, d = [], [], [], []
    for P, M in parts:
        impl = implicit_equalities(P)
        if M is None:
            rows = [(list(r), h) for r, h in zip(P.A, P.b)]
            eqs = [(list(r), h) for r, h in zip(P.E, P.d)]
        else:
            Q = M.preimage(P)
            rows = [(list(r), h) for r, h in zip(Q.A, Q.b)]
            eqs = [(list(r), h) for r, h in zip(Q.E, Q.d)]
        for i, (r, h) in enumerate(rows):
            if not any(P.A[i]):
                continue
            A.append(r + [0 if i in impl else 1])
            b.append(h)
        for r, h in eqs:
            E.append(r + [0])
            d.append(h)
    A.append([0] * nvars + [1])
    b.append(1)
    out = lp_solve([0] * nvars + [1], HPolyhedron(nvars + 1, A, b, E, d), "max")
    return out


def ri_meet(parts: Sequence[tuple[HPolyhedron, "AffineMap | None"]], nvars: int) -> RatVector | None:
    """A point z with ``M_k z + c_k in ri(P_k)`` for every part, or None.

    ``parts`` holds pairs (P, M) where M is an affine map into P's space, or
    None when P already lives in the common space of dimension ``nvars``.
    Implicit rows are computed for each P in its own space.
    """
    try:
        out = _ri_lp(parts, nvars)
    except EmptySet:
        return None
    if isinstance(out, Optimal) and out.value > 0:
        return out.point[:nvars]
    return None


def ri_intersection_nonempty(*Ps: HPolyhedron) -> bool:
    """Whether the relative interiors of all ``Ps`` have a common point."""
    if not Ps:
        raise ValueError("need at least one polyhedron")
    n = Ps[0].dim
    _same_dim(Ps)
    return ri_meet([(P, None) for P in Ps], n) is not None


def ri_point(P: HPolyhedron) -> RiCertificate:
    impl = implicit_equalities(P)
    out = _ri_lp([(P, None)], P.dim)
    assert isinstance(out, Optimal) and out.value > 0, "relative interior must be nonempty"
    return RiCertificate(out.point[: P.dim], impl, out.value)


def ri_contains(P: HPolyhedron, x: Sequence[Fraction]) -> bool:
    x = vec(x)
    if not P.contains(x):
        return False
    impl = implicit_equalities(P)
    return all(inner(a, x) < bi for i, (a, bi) in enumerate(zip(P.A, P.b)) if i not in impl and any(a))


def is_interior(P: HPolyhedron, x: Sequence[Fraction]) -> bool:
    """Topological interior (not relative): every nontrivial row strict, no real equalities."""
    x = vec(x)
    if not P.contains(x):
        return False
    if any(any(e) for e in P.E):
        return False
    return all(inner(a, x) < bi for a, bi in zip(P.A, P.b) if any(a))


# ---------------------------------------------------------------------------
# double description


def _int_row(row: Sequence[Fraction]) -> list[int]:
    den = 1
    for a in row:
        den = den * a.denominator // gcd(den, a.denominator)
    ints = [int(a * den) for a in row]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return [a // g for a in ints] if g > 1 else ints


def _idot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _iprim(v: list[int]) -> tuple[int, ...]:
    g = 0
    for a in v:
        g = gcd(g, a)
    return tuple(a // g for a in v) if g > 1 else tuple(v)


def cone_generators(ineq: Sequence[Sequence[Fraction]], eq: Sequence[Sequence[Fraction]], k: int):
    """Extreme rays and a lineality basis of ``{z | G z <= 0, F z = 0}`` in R^k.

    Returns (rays, lineality) as lists of rational vectors.  The pointed part
    is enumerated by the double description method in integer arithmetic on
    the subspace orthogonal to the lineality space.
    """
    all_rows = [list(r) for r in ineq] + [list(r) for r in eq]
    if all_rows:
        lin = nullspace(all_rows, k)
    else:
        lin = nullspace([[Fraction(0)] * k], k)
    eq_rows = [list(r) for r in eq] + [list(l) for l in lin]
    N = nullspace(eq_rows, k) if eq_rows else nullspace([[Fraction(0)] * k], k)
    s = len(N)
    lineality = [primitive(l) for l in lin]
    if s == 0:
        return [], lineality
    # integer basis of the subspace; z = Nmat y
    Ncols = [_int_row(c) for c in N]
    G = []
    for r in ineq:
        ri = _int_row(r) if any(r) else None
        if ri is None:
            continue
        row = [_idot(ri, c) for c in Ncols]
        if any(row):
            G.append(_iprim(row))
    G = list(dict.fromkeys(G))
    rays = _dd_pointed(G, s)
    out = []
    for y in rays:
        z = [sum(y[j] * Ncols[j][i] for j in range(s)) for i in range(k)]
        out.append(tuple(Fraction(v) for v in _iprim(z)))
    return out, lineality


def _dd_pointed(G: list[tuple[int, ...]], s: int) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone {y in Z^s | G y <= 0} (G has rank s)."""
    # initial simplicial cone from s independent rows
    frac_rows = [[Fraction(v) for v in g] for g in G]
    basis_idx = independent_rows(frac_rows, s)
    if len(basis_idx) != s:
        raise ArithmeticError("cone is not pointed")
    K = [frac_rows[i] for i in basis_idx]
    rays: list[tuple[int, ...]] = []
    zsets: list[int] = []
    for j in range(s):
        rhs = [Fraction(-1) if i == j else Fraction(0) for i in range(s)]
        y = solve(K, rhs, s)
        yi = _iprim(_int_row(y))
        rays.append(yi)
        zsets.append(0)
    order = basis_idx + [i for i in range(len(G)) if i not in basis_idx]
    # zero sets are bitmasks over positions in `order`
    for pos in range(s):
        g = G[order[pos]]
        for r in range(s):
            if _idot(g, rays[r]) == 0:
                zsets[r] |= 1 << pos
    for pos in range(s, len(order)):
        g = G[order[pos]]
        vals = [_idot(g, r) for r in rays]
        plus = [i for i, v in enumerate(vals) if v > 0]
        minus = [i for i, v in enumerate(vals) if v < 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        if not plus:
            bit = 1 << pos
            for i in zero:
                zsets[i] |= bit
            continue
        new_rays = [rays[i] for i in minus] + [rays[i] for i in zero]
        new_z = [zsets[i] for i in minus] + [zsets[i] | (1 << pos) for i in zero]
        for ip in plus:
            for im in minus:
                common = zsets[ip] & zsets[im]
                if bin(common).count("1") < s - 2:
                    continue
                if any(
                    (zsets[o] & common) == common
                    for o in range(len(rays))
                    if o != ip and o != im
                ):
                    continue
                vp, vm = vals[ip], vals[im]
                r = [vp * a - vm * c for a, c in zip(rays[im], rays[ip])]
                new_rays.append(_iprim(r))
                new_z.append(common | (1 << pos))
        rays, zsets = new_rays, new_z
    return rays


def _check_cap(dim: int) -> None:
    cap = dim_cap()
    if dim > cap:
        raise DimensionCapExceeded(f"dimension {dim} exceeds cap {cap} (set CONVEXCALC_DIM_CAP)")


@lru_cache(maxsize=4096)
def dd_convert(P: HPolyhedron) -> VPolyhedron:
    """H-representation to an irredundant V-representation."""
    _check_cap(P.dim)
    n = P.dim
    # homogenised cone in (x, t): A x - b t <= 0, E x - d t = 0, -t <= 0
    ineq = [list(a) + [-bi] for a, bi in zip(P.A, P.b)]
    ineq.append([Fraction(0)] * n + [Fraction(-1)])
    eq = [list(e) + [-di] for e, di in zip(P.E, P.d)]
    rays, lin = cone_generators(ineq, eq, n + 1)
    points, dirs = [], []
    for r in rays:
        t = r[n]
        if t > 0:
            points.append(tuple(v / t for v in r[:n]))
        else:
            dirs.append(r[:n])
    # lineality of the homogenised cone always has t = 0
    return VPolyhedron(n, points, dirs, [l[:n] for l in lin])


@lru_cache(maxsize=4096)
def dd_convert_back(V: VPolyhedron) -> HPolyhedron:
    """V-representation to an irredundant H-representation."""
    _check_cap(V.dim)
    n = V.dim
    if V.is_empty:
        return HPolyhedron(n, [[0] * n], [-1])
    # polar of the homogenised cone: h = (a, -beta) with h.g <= 0 for generators
    ineq = [list(p) + [Fraction(1)] for p in V.points]
    ineq += [list(r) + [Fraction(0)] for r in V.rays]
    eq = [list(l) + [Fraction(0)] for l in V.lineality]
    rays, lin = cone_generators(ineq, eq, n + 1)
    A, b, E, d = [], [], [], []
    for h in rays:
        a, beta = h[:n], -h[n]
        if is_zero(a):
            continue
        A.append(a)
        b.append(beta)
    for h in lin:
        E.append(h[:n])
        d.append(-h[n])
    return HPolyhedron(n, A, b, E, d)


# ---------------------------------------------------------------------------
# constructions

PolySet = Union[HPolyhedron, VPolyhedron]


def as_v(P) -> VPolyhedron:
    if isinstance(P, VPolyhedron):
        return P
    if isinstance(P, HPolyhedron):
        return dd_convert(P)
    if hasattr(P, "to_vpoly"):
        return P.to_vpoly()
    raise TypeError(f"not a polyhedron: {type(P).__name__}")


def as_h(P) -> HPolyhedron:
    if isinstance(P, HPolyhedron):
        return P
    return dd_convert_back(as_v(P))


def linear_image(B: AffineMap, V: VPolyhedron) -> VPolyhedron:
    V = as_v(V)
    if V.dim != B.n:
        raise DimensionMismatch("affine map domain differs from polyhedron dimension")
    if V.is_empty:
        return VPolyhedron.empty(B.p)
    return VPolyhedron(
        B.p,
        [B(p) for p in V.points],
        [B.linear(r) for r in V.rays],
        [B.linear(l) for l in V.lineality],
    )


def minkowski_sum(*Vs: PolySet) -> VPolyhedron:
    Vs = [as_v(V) for V in Vs]
    if not Vs:
        raise ValueError("need at least one summand")
    _same_dim(Vs)
    n = Vs[0].dim
    if any(V.is_empty for V in Vs):
        return VPolyhedron.empty(n)
    points = [tuple([Fraction(0)] * n)]
    for V in Vs:
        points = list(dict.fromkeys(tuple(a + b for a, b in zip(p, q)) for p in points for q in V.points))
    rays = [r for V in Vs for r in V.rays]
    lin = [l for V in Vs for l in V.lineality]
    return VPolyhedron(n, points, rays, lin)


def negate(V: PolySet) -> VPolyhedron:
    V = as_v(V)
    return VPolyhedron(V.dim, [neg(p) for p in V.points], [neg(r) for r in V.rays], V.lineality)


def minkowski_diff(V1: PolySet, V2: PolySet) -> VPolyhedron:
    return minkowski_sum(V1, negate(V2))


def convex_hull_union(*Vs: PolySet) -> VPolyhedron:
    """Closed convex hull of a union: all generators pooled."""
    Vs = [as_v(V) for V in Vs if not as_v(V).is_empty]
    if not Vs:
        raise EmptySet("hull of empty sets")
    _same_dim(Vs)
    return VPolyhedron(
        Vs[0].dim,
        [p for V in Vs for p in V.points],
        [r for V in Vs for r in V.rays],
        [l for V in Vs for l in V.lineality],
    )


def intersect(*Ps: PolySet) -> HPolyhedron:
    if not Ps:
        raise ValueError("need at least one polyhedron")
    Ps = [as_h(P) for P in Ps]
    _same_dim(Ps)
    return HPolyhedron(
        Ps[0].dim,
        [r for P in Ps for r in P.A],
        [v for P in Ps for v in P.b],
        [r for P in Ps for r in P.E],
        [v for P in Ps for v in P.d],
    )


def product(P: HPolyhedron, Q: HPolyhedron) -> HPolyhedron:
    n = P.dim + Q.dim
    return intersect(P.lift(n, range(P.dim)), Q.lift(n, range(P.dim, n)))


def project_coords(V: PolySet, keep: Sequence[int]) -> VPolyhedron:
    """Orthogonal projection onto the coordinates ``keep`` (0-based, in order)."""
    V = as_v(V)
    keep = list(keep)
    if not keep:
        raise ValueError("must keep at least one coordinate")
    for k in keep:
        if not (0 <= k < V.dim):
            raise IndexError(f"coordinate {k} out of range for dimension {V.dim}")
    pick = lambda v: tuple(v[k] for k in keep)  # noqa: E731
    return VPolyhedron(
        len(keep),
        [pick(p) for p in V.points],
        [pick(r) for r in V.rays],
        [pick(l) for l in V.lineality],
    )


def _same_dim(Ps) -> None:
    dims = {P.dim for P in Ps}
    if len(dims) > 1:
        raise DimensionMismatch(f"mixed dimensions {sorted(dims)}")


# ---------------------------------------------------------------------------
# inclusion and equality


def v_in_h(V: VPolyhedron, H: HPolyhedron) -> bool:
    """Exact generator substitution test for ``V subset H``."""
    if V.dim != H.dim:
        raise DimensionMismatch("dimension mismatch")
    if V.is_empty:
        return True
    for p in V.points:
        if not H.contains(p):
            return False
    for r in V.rays:
        if any(inner(a, r) > 0 for a in H.A) or any(inner(e, r) != 0 for e in H.E):
            return False
    for l in V.lineality:
        if any(inner(a, l) != 0 for a in H.A) or any(inner(e, l) != 0 for e in H.E):
            return False
    return True


def subset(P, Q) -> bool:
    """Whether set P is contained in set Q (any representations)."""
    return v_in_h(as_v(P), as_h(Q))


def set_equal(P, Q) -> bool:
    if P.dim != Q.dim:
        raise DimensionMismatch(f"dimension mismatch: {P.dim} vs {Q.dim}")
    return subset(P, Q) and subset(Q, P)


def find_outside(P, Q) -> RatVector | None:
    """A point of P that is not in Q, or None when P is a subset of Q."""
    V, H = as_v(P), as_h(Q)
    if V.is_empty:
        return None
    for p in V.points:
        if not H.contains(p):
            return p
    p0 = V.points[0]
    for r in list(V.rays) + list(V.lineality) + [neg(l) for l in V.lineality]:
        for a, bi in zip(H.A, H.b):
            ar = inner(a, r)
            if ar > 0:
                slack = bi - inner(a, p0)
                t = slack / ar
                k = Fraction(int(t) + 1) if t >= 0 else Fraction(1)
                cand = tuple(x + k * y for x, y in zip(p0, r))
                if not H.contains(cand):
                    return cand
        for e, di in zip(H.E, H.d):
            if inner(e, r) != 0:
                for k in (1, 2):
                    cand = tuple(x + k * y for x, y in zip(p0, r))
                    if not H.contains(cand):
                        return cand
    return None

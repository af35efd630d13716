"""Euclidean projection, strict and proper separation, qualification checks."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence, Union

from .exact import (
    Infeasible,
    Optimal,
    RatVector,
    Unbounded,
    independent_rows,
    inner,
    is_zero,
    lp_solve,
    solve,
    sub,
    vec,
)
from .polyhedron import (
    EmptySet,
    HPolyhedron,
    as_h,
    dd_convert,
    dd_convert_back,
    implicit_equalities,
    intersect,
    minkowski_diff,
    ri_contains,
)

ENUMERATION_CAP = 20

Bound = Union[Fraction, float]  # float only for +/- math.inf


class EnumerationCapExceeded(ValueError):
    pass


class PointInsideSet(ValueError):
    pass


class PointOutsideSet(ValueError):
    pass


@dataclass(frozen=True)
class ProjectionResult:
    point: RatVector
    squared_distance: Fraction
    active_rows: tuple


@dataclass(frozen=True)
class SeparationCertificate:
    """Separating direction with the LP-verified support values on both sides."""

    v: RatVector
    sup_left: Bound
    inf_left: Bound
    sup_right: Bound
    inf_right: Bound

    @property
    def strict(self) -> bool:
        return self.sup_left < self.inf_right

    @property
    def proper(self) -> bool:
        return self.sup_left <= self.inf_right and self.inf_left < self.sup_right


def support(v: Sequence[Fraction], P: HPolyhedron, sense: str = "max") -> Bound:
    """sup (or inf) of <v, x> over P, with infinities as floats."""
    out = lp_solve(v, P, sense)
    if isinstance(out, Optimal):
        return out.value
    if isinstance(out, Unbounded):
        return math.inf if sense == "max" else -math.inf
    raise EmptySet("support function of an empty set")


def variational_gap(x: Sequence[Fraction], w: Sequence[Fraction], P: HPolyhedron) -> Bound:
    """max over P of <x - w, y - w>; zero exactly when w is the projection of x."""
    v = sub(x, w)
    s = support(v, P, "max")
    return s - inner(v, w)


def euclid_project(x: Sequence[Fraction], P: HPolyhedron) -> ProjectionResult:
    """Exact Euclidean projection by active-set enumeration.

    Candidate faces are independent subsets of inequality rows (together with
    all equalities); a candidate is accepted when it is feasible and its KKT
    multipliers are nonnegative.  The accepted point is certified by the LP
    form of the variational inequality.
    """
    x = vec(x)
    P = as_h(P)
    if len(P.A) > ENUMERATION_CAP:
        raise EnumerationCapExceeded(f"{len(P.A)} inequality rows exceed the cap of {ENUMERATION_CAP}")
    if P.contains(x):
        return ProjectionResult(x, Fraction(0), tuple(P.active_rows(x)))
    implicit_equalities(P)  # raises EmptySet
    n = P.dim
    eq_idx = independent_rows(P.E, n)
    eqs = [P.E[i] for i in eq_idx]
    eqd = [P.d[i] for i in eq_idx]
    room = n - len(eqs)
    rows = [i for i, a in enumerate(P.A) if any(a)]
    found: list[RatVector] = []
    for size in range(0, room + 1):
        for S in combinations(rows, size):
            M = eqs + [P.A[i] for i in S]
            if len(independent_rows(M, n)) != len(M):
                continue
            h = eqd + [P.b[i] for i in S]
            # w = x - M^T lam with M w = h  =>  (M M^T) lam = M x - h
            G = [[inner(r1, r2) for r2 in M] for r1 in M]
            rhs = [inner(r, x) - hi for r, hi in zip(M, h)]
            lam = solve(G, rhs, len(M)) if M else ()
            if lam is None:
                continue
            if any(l < 0 for l in lam[len(eqs):]):
                continue
            w = list(x)
            for l, r in zip(lam, M):
                if l:
                    for j in range(n):
                        w[j] -= l * r[j]
            w = tuple(w)
            if P.contains(w) and w not in found:
                found.append(w)
        if found:
            break
    if len(found) != 1:
        raise ArithmeticError(f"projection not unique or not found ({len(found)} candidates)")
    w = found[0]
    if variational_gap(x, w, P) != 0:
        raise ArithmeticError("projection candidate fails the variational inequality")
    dist = sub(x, w)
    return ProjectionResult(w, inner(dist, dist), tuple(P.active_rows(w)))


def strictly_separate(x: Sequence[Fraction], P: HPolyhedron) -> SeparationCertificate:
    """Separate a point from a polyhedron by ``v = x - proj(x)``.

    The left set is P and the right set is {x}.
    """
    x = vec(x)
    P = as_h(P)
    if P.contains(x):
        raise PointInsideSet("point lies in the set")
    w = euclid_project(x, P).point
    v = sub(x, w)
    sup_left = support(v, P, "max")
    inf_left = support(v, P, "min")
    val = inner(v, x)
    cert = SeparationCertificate(v, sup_left, inf_left, val, val)
    if not sup_left < val:
        raise ArithmeticError("strict separation certificate failed LP verification")
    return cert


def _project_onto_span_complement(a: Sequence[Fraction], rows: list) -> RatVector:
    """Component of ``a`` orthogonal to the row space of ``rows``."""
    if not rows:
        return tuple(a)
    n = len(a)
    idx = independent_rows(rows, n)
    M = [rows[i] for i in idx]
    G = [[inner(r1, r2) for r2 in M] for r1 in M]
    lam = solve(G, [inner(r, a) for r in M], len(M))
    out = list(a)
    for l, r in zip(lam, M):
        for j in range(n):
            out[j] -= l * r[j]
    return tuple(out)


def properly_separate(P1: HPolyhedron, P2: HPolyhedron) -> SeparationCertificate | None:
    """Proper separation certificate, or None when ri(P1) and ri(P2) meet."""
    P1, P2 = as_h(P1), as_h(P2)
    V1, V2 = dd_convert(P1), dd_convert(P2)
    if V1.is_empty or V2.is_empty:
        raise EmptySet("proper separation needs nonempty sets")
    diff = dd_convert_back(minkowski_diff(V1, V2))
    zero = tuple(Fraction(0) for _ in range(P1.dim))
    if ri_contains(diff, zero):
        return None
    if not diff.contains(zero):
        v = strictly_separate(zero, diff).v
    else:
        impl = implicit_equalities(diff)
        span_rows = list(diff.E) + [diff.A[i] for i in sorted(impl)]
        v = None
        for i, (a, bi) in enumerate(zip(diff.A, diff.b)):
            if i in impl or bi != 0 or not any(a):
                continue
            cand = _project_onto_span_complement(a, span_rows)
            if not is_zero(cand):
                v = cand
                break
        if v is None:
            raise ArithmeticError("no facet active at the origin although 0 is not in ri")
    cert = SeparationCertificate(
        v,
        support(v, P1, "max"),
        support(v, P1, "min"),
        support(v, P2, "max"),
        support(v, P2, "min"),
    )
    if not cert.proper:
        raise ArithmeticError("proper separation certificate failed LP verification")
    return cert


def check_basic_qc(P1: HPolyhedron, P2: HPolyhedron, x: Sequence[Fraction]) -> bool:
    """Whether N(x; P1) and -N(x; P2) meet only at the origin."""
    from .normals import normal_cone

    x = vec(x)
    P1, P2 = as_h(P1), as_h(P2)
    N1 = normal_cone(P1, x)
    N2 = normal_cone(P2, x)
    both = intersect(dd_convert_back(N1.to_vpoly()), dd_convert_back(N2.negated().to_vpoly()))
    V = dd_convert(both)
    return not V.rays and not V.lineality


def farkas_infeasible(P: HPolyhedron) -> RatVector | None:
    out = lp_solve([0] * P.dim, P)
    return out.farkas_certificate if isinstance(out, Infeasible) else None

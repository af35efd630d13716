"""Two nonpolyhedral instances with closed-form answers.

The exact engine only handles polyhedra, so these answers are hardcoded.
Grid probes check the hardcoded cones against sample points of the curved
sets to catch transcription mistakes.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .exact import RatVector, inner, vec, zeros
from .normals import Cone, RuleReport, compare_sets

GRID = tuple(Fraction(k, 2) for k in range(-6, 7))  # -3, -5/2, ..., 3


@dataclass(frozen=True)
class GalleryItem:
    id: str
    description: str
    member: Callable


def ball_subdiff_member(v: Sequence, x: Sequence) -> bool:
    """Membership in the subdifferential of the Euclidean norm at x.

    At the origin this is the closed unit ball.  Elsewhere it is the single
    vector x/|x|, tested through squared quantities so no square root is
    needed: v is parallel to x with the same orientation and has unit length.
    """
    v, x = vec(v), vec(x)
    vv = inner(v, v)
    if all(c == 0 for c in x):
        return vv <= 1
    vx = inner(v, x)
    return vx > 0 and vv == 1 and vx * vx == vv * inner(x, x)


BALL = GalleryItem("ball-norm", "subdifferential of the Euclidean norm", ball_subdiff_member)


# parabola pair: Omega1 = {lam >= x^2}, Omega2 = {lam <= -x^2}, base point (0, 0)
N_OMEGA1 = Cone(2, [(0, -1)])
N_OMEGA2 = Cone(2, [(0, 1)])
N_MEET = Cone(2, [], [(1, 0), (0, 1)])


def on_omega1(x: Fraction) -> RatVector:
    return (x, x * x)


def on_omega2(x: Fraction) -> RatVector:
    return (x, -x * x)


def _on_meet(x: Fraction) -> RatVector:
    # grid points of the parabola lying in both sets; only x = 0 qualifies
    w = on_omega1(x)
    return w if w[1] <= -x * x else (Fraction(0), Fraction(0))


def grid_probe(v: Sequence, curve: Callable[[Fraction], RatVector], grid: Sequence[Fraction] = GRID) -> list[Fraction]:
    """Grid abscissae where ``<v, w - 0> <= 0`` fails for w on the curve."""
    v = vec(v)
    return [x for x in grid if inner(v, curve(x)) > 0]


def _cone_probes_pass(C: Cone, curves) -> bool:
    vecs = list(C.generators) + list(C.lineality) + [tuple(-c for c in l) for l in C.lineality]
    return all(not grid_probe(g, c) for g in vecs for c in curves)


def parabola_counterexample() -> RuleReport:
    """Intersection rule without a common relative-interior point.

    The two sets touch only at the origin, so the normal cone of the
    intersection is the whole plane, while the sum of the two normal cones
    is the vertical axis.
    """
    lhs = N_MEET.to_vpoly()
    rhs = Cone.sum(N_OMEGA1, N_OMEGA2).to_vpoly()
    verdict, witness = compare_sets(lhs, rhs)
    probes = {
        "omega1": _cone_probes_pass(N_OMEGA1, [on_omega1]),
        "omega2": _cone_probes_pass(N_OMEGA2, [on_omega2]),
        "meet": _cone_probes_pass(N_MEET, [_on_meet]),
    }
    return RuleReport(
        "parabola-pair",
        lhs,
        rhs,
        False,
        verdict,
        witness,
        {"grid_probes": probes, "base_point": zeros(2)},
    )


PARABOLA = GalleryItem("parabola-pair", "intersection rule fails without the ri condition", parabola_counterexample)

from fractions import Fraction as F

from convexcalc.gallery import (
    GRID,
    N_MEET,
    N_OMEGA1,
    N_OMEGA2,
    ball_subdiff_member,
    grid_probe,
    on_omega1,
    parabola_counterexample,
)
from convexcalc.normals import Cone
from convexcalc.polyhedron import VPolyhedron


def test_ball_at_origin():
    assert ball_subdiff_member((F(3, 5), F(4, 5)), (0, 0))
    assert ball_subdiff_member((0, F(1, 2)), (0, 0))
    assert not ball_subdiff_member((1, 1), (0, 0))


def test_ball_away_from_origin():
    assert ball_subdiff_member((F(3, 5), F(4, 5)), (3, 4))
    assert ball_subdiff_member((F(3, 5), F(4, 5)), (6, 8))
    assert not ball_subdiff_member((F(-3, 5), F(-4, 5)), (3, 4))
    assert not ball_subdiff_member((F(3, 10), F(4, 10)), (3, 4))
    # |(1, 1)| is irrational, so no rational vector is the gradient there
    assert not ball_subdiff_member((F(7, 10), F(7, 10)), (1, 1))


def test_grid_covers_minus_three_to_three():
    assert GRID[0] == -3 and GRID[-1] == 3 and F(-5, 2) in GRID and len(GRID) == 13


def test_parabola_memberships():
    assert VPolyhedron(2, [(0, 0)], N_OMEGA1.generators).contains((0, -1))
    rhs = Cone.sum(N_OMEGA1, N_OMEGA2).to_vpoly()
    assert not rhs.contains((1, 0))
    assert N_MEET.to_vpoly().contains((1, 0))


def test_grid_probe_rejects_tilted_normal():
    bad = grid_probe((1, -1), on_omega1)
    assert F(1, 2) in bad and 2 not in bad


def test_parabola_report():
    rep = parabola_counterexample()
    assert rep.verdict == "RhsStrictlySmaller"
    assert rep.witness == (1, 0)
    assert all(rep.details["grid_probes"].values())
    assert rep.qualification_holds is False

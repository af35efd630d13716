from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from convexcalc.exact import (
    DimensionMismatch,
    Infeasible,
    Optimal,
    Unbounded,
    fmt,
    inner,
    lp_solve,
    nullspace,
    primitive,
    rank,
    rat,
    rref,
    solve,
    verify_farkas,
)
from convexcalc.polyhedron import HPolyhedron, dd_convert

from .conftest import int_vectors, small_int


def test_inner_product():
    assert inner((F(1), F(2)), (F(3), F(4))) == 11


def test_inner_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        inner((F(1),), (F(1), F(2)))


def test_rat_rejects_floats():
    with pytest.raises(TypeError):
        rat(0.5)
    assert rat("3/6") == F(1, 2)


def test_nullspace_of_rank_one_matrix():
    (v,) = nullspace([[1, 1], [2, 2]])
    assert primitive(v) in ((F(1), F(-1)), (F(-1), F(1)))


def test_rref_and_rank():
    rows, pivots = rref([[F(2), F(4)], [F(1), F(3)]], 2)
    assert pivots == [0, 1]
    assert rank([[1, 2, 3], [2, 4, 6], [0, 0, 1]]) == 2


def test_solve_returns_none_when_inconsistent():
    assert solve([[1, 1], [1, 1]], [1, 2], 2) is None
    assert solve([[1, 1], [1, -1]], [2, 0], 2) == (1, 1)


def test_fmt():
    assert fmt(F(3)) == "3"
    assert fmt(F(-2, 4)) == "-1/2"


def test_lp_optimal():
    out = lp_solve([1], HPolyhedron(1, [[1]], [3]), "max")
    assert isinstance(out, Optimal) and out.value == 3


def test_lp_unbounded_with_ray():
    out = lp_solve([1, 0], HPolyhedron(2, [[-1, 0]], [0]), "max")
    assert isinstance(out, Unbounded)
    assert out.ray[0] > 0 and out.ray[1] == 0


def test_lp_infeasible_certificate():
    P = HPolyhedron(1, [[1], [-1]], [-1, 0])
    out = lp_solve([0], P)
    assert isinstance(out, Infeasible)
    assert verify_farkas(P, out.farkas_certificate)


def test_lp_equalities_and_min():
    P = HPolyhedron(2, [[-1, 0], [0, -1]], [0, 0], [[1, 1]], [1])
    out = lp_solve([1, 2], P, "min")
    assert isinstance(out, Optimal) and out.value == 1 and out.point == (1, 0)


def test_lp_infeasible_equalities():
    P = HPolyhedron(2, E=[[1, 1], [1, 1]], d=[0, 1])
    out = lp_solve([0, 0], P)
    assert isinstance(out, Infeasible) and verify_farkas(P, out.farkas_certificate)


@given(st.lists(st.tuples(int_vectors(2), small_int), min_size=1, max_size=6), int_vectors(2))
def test_lp_matches_vertex_enumeration(rows, c):
    """The simplex optimum is at least the best vertex and at most any bound."""
    A = [r for r, _ in rows]
    b = [h for _, h in rows]
    P = HPolyhedron(2, A, b)
    out = lp_solve(c, P, "max")
    if isinstance(out, Infeasible):
        assert verify_farkas(P, out.farkas_certificate)
        assert dd_convert(P).is_empty
        return
    V = dd_convert(P)
    assert not V.is_empty
    best = max(inner(c, p) for p in V.points)
    if isinstance(out, Optimal):
        assert out.value == best
        assert P.contains(out.point)
        assert all(inner(c, r) <= 0 for r in V.rays) and all(inner(c, l) == 0 for l in V.lineality)
    else:
        assert P.contains(out.feasible_point)
        assert all(inner(a, out.ray) <= 0 for a in A)
        assert inner(c, out.ray) > 0


@given(st.lists(st.tuples(int_vectors(3), small_int), min_size=1, max_size=7))
def test_bland_terminates_within_cap(rows):
    A = [r for r, _ in rows]
    b = [h for _, h in rows]
    out = lp_solve((1, 1, 1), HPolyhedron(3, A, b))
    cap = 10 * (len(A) + 6) ** 2
    assert out.iterations <= cap

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from convexcalc.exact import inner, sub
from convexcalc.oracle import InstanceSpec, gen_instance
from convexcalc.polyhedron import (
    EmptySet,
    HPolyhedron,
    VPolyhedron,
    dd_convert,
    dd_convert_back,
    ri_intersection_nonempty,
)
from convexcalc.separation import (
    EnumerationCapExceeded,
    PointInsideSet,
    PointOutsideSet,
    check_basic_qc,
    euclid_project,
    properly_separate,
    strictly_separate,
    variational_gap,
)

from .conftest import int_vectors

TRIANGLE = HPolyhedron(2, [[-1, 0], [0, -1], [1, 1]], [0, 0, 1])
LINE = HPolyhedron(2, E=[[0, 1]], d=[0])
HALF_LINE = HPolyhedron(2, [[1, 0]], [0], [[0, 1]], [0])


def test_projection_of_inside_point_is_itself():
    res = euclid_project((F(1, 4), F(1, 4)), TRIANGLE)
    assert res.point == (F(1, 4), F(1, 4)) and res.squared_distance == 0


def test_projection_onto_halfplane():
    # hyperplane formula: x - ((<a,x> - b)/<a,a>) a
    x, a = (F(1), F(1)), (F(1), F(1))
    expected = tuple(xi - (inner(a, x) / inner(a, a)) * ai for xi, ai in zip(x, a))
    res = euclid_project(x, HPolyhedron(2, [a], [0]))
    assert res.point == expected == (0, 0)
    assert res.squared_distance == 2


def test_projection_single_active_row():
    res = euclid_project((2, 0), HPolyhedron(2, [[1, 0]], [0]))
    assert res.point == (0, 0) and res.active_rows == (0,)


def test_projection_onto_triangle_corner_region():
    res = euclid_project((3, -1), TRIANGLE)
    assert res.point == (1, 0)
    assert variational_gap((3, -1), res.point, TRIANGLE) == 0


def test_projection_errors():
    with pytest.raises(EmptySet):
        euclid_project((0,), HPolyhedron(1, [[1], [-1]], [-1, 0]))
    many = HPolyhedron(1, [[1]] * 21, [1] * 21)
    with pytest.raises(EnumerationCapExceeded):
        euclid_project((5,), many)


def test_strict_separation_halfplane():
    cert = strictly_separate((1, 0), HPolyhedron(2, [[1, 0]], [0]))
    assert cert.v == (1, 0) and cert.sup_left == 0 and cert.inf_right == 1


def test_strict_separation_interval():
    cert = strictly_separate((2,), HPolyhedron.box((0,), (1,)))
    assert cert.v == (1,) and cert.sup_left == 1 < cert.inf_right == 2


def test_strict_separation_triangle():
    cert = strictly_separate((2, 2), TRIANGLE)
    # projection is (1/2, 1/2), so v points along (1, 1)
    assert cert.v[0] == cert.v[1] > 0
    scale = cert.v[0]
    assert cert.sup_left / scale == 1
    assert cert.inf_right / scale == 4


def test_strict_separation_rejects_inside_point():
    with pytest.raises(PointInsideSet):
        strictly_separate((0, 0), TRIANGLE)


def test_proper_separation_of_opposite_halfplanes():
    cert = properly_separate(HPolyhedron(2, [[-1, 0]], [0]), HPolyhedron(2, [[1, 0]], [0]))
    assert cert is not None and cert.proper
    assert cert.v[1] == 0 and cert.v[0] != 0


def test_line_and_half_line_not_separable():
    assert properly_separate(LINE, HALF_LINE) is None


def test_set_not_separable_from_itself():
    assert properly_separate(TRIANGLE, TRIANGLE) is None


def test_proper_separation_of_touching_segments():
    # two collinear segments meeting at a point, in R^2
    A = dd_convert_back(VPolyhedron(2, [(0, 0), (1, 0)]))
    B = dd_convert_back(VPolyhedron(2, [(0, 0), (-1, 0)]))
    cert = properly_separate(A, B)
    assert cert is not None and cert.proper


def test_basic_qc_examples():
    assert check_basic_qc(LINE, HALF_LINE, (0, 0)) is False
    assert check_basic_qc(HPolyhedron(2, [[1, 0]], [0]), HPolyhedron(2, [[-1, 0]], [0]), (0, 0)) is False
    assert check_basic_qc(HPolyhedron.whole(2), HPolyhedron.whole(2), (3, 4)) is True
    with pytest.raises(PointOutsideSet):
        check_basic_qc(LINE, HALF_LINE, (1, 0))


@st.composite
def point_and_polytope(draw):
    pts = draw(st.lists(int_vectors(2), min_size=1, max_size=5))
    x = draw(int_vectors(2))
    return x, VPolyhedron(2, pts)


@given(point_and_polytope())
def test_projection_contract(case):
    x, V = case
    P = dd_convert_back(V)
    res = euclid_project(x, P)
    assert P.contains(res.point)
    # variational inequality on every generator
    d = sub(x, res.point)
    assert all(inner(d, sub(w, res.point)) <= 0 for w in V.points)
    # idempotence
    assert euclid_project(res.point, P).point == res.point
    # no convex combination of generators is closer
    rng = random.Random(0)
    for _ in range(20):
        weights = [F(rng.randint(1, 5)) for _ in V.points]
        total = sum(weights)
        w = tuple(sum(c * p[i] for c, p in zip(weights, V.points)) / total for i in range(2))
        diff = sub(x, w)
        assert inner(diff, diff) >= res.squared_distance


@given(point_and_polytope())
def test_strict_separation_certificate(case):
    x, V = case
    P = dd_convert_back(V)
    if P.contains(x):
        return
    cert = strictly_separate(x, P)
    assert max(inner(cert.v, p) for p in V.points) == cert.sup_left < inner(cert.v, x)


@pytest.mark.parametrize("qualified", [True, False])
def test_basic_qc_implies_ri_qc(qualified):
    for t in range(30):
        inst = gen_instance(InstanceSpec(11, (2, 2, 2), qualified=qualified), "intersection", t)
        P1, P2 = inst["sets"][:2]
        if check_basic_qc(P1, P2, inst["point"]):
            assert ri_intersection_nonempty(P1, P2)

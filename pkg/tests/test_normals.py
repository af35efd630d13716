from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from convexcalc.normals import (
    Cone,
    ContinuityHypothesisUnverifiable,
    MaxAffineFunction,
    PieceCapExceeded,
    PointOutsideDomain,
    chain_rule_affine,
    affine_graph_normal,
    fermat_check,
    intersection_rule,
    max_rule,
    normal_cone,
    subdiff_nonempty_on_ri,
    subdifferential,
    sum_function,
    sum_rule,
)
from convexcalc.oracle import (
    closed_form_subdiff,
    oracle_normal_membership,
    oracle_subgradient,
    run_fuzz,
)
from convexcalc.polyhedron import (
    AffineMap,
    HPolyhedron,
    VPolyhedron,
    dd_convert,
    dd_convert_back,
    ri_contains,
    ri_point,
    set_equal,

)
from convexcalc.separation import PointOutsideSet

from .conftest import int_vectors

LINE = HPolyhedron(2, E=[[0, 1]], d=[0])
HALF_LINE = HPolyhedron(2, [[1, 0]], [0], [[0, 1]], [0])
ABS = MaxAffineFunction(1, [((1,), 0), ((-1,), 0)])


def interval(lo, hi):
    return HPolyhedron.box((lo,), (hi,))


def test_normal_cone_of_line():
    C = normal_cone(LINE, (0, 0))
    assert C.generators == () and C.lineality == ((0, 1),)


def test_normal_cone_of_half_line():
    C = normal_cone(HALF_LINE, (0, 0))
    assert C.generators == ((1, 0),)
    assert set_equal(C.to_vpoly(), VPolyhedron(2, [(0, 0)], [(1, 0)], [(0, 1)]))


def test_normal_cone_at_interior_point_is_trivial():
    assert normal_cone(HPolyhedron.box((0, 0), (2, 2)), (1, 1)).is_trivial()


def test_normal_cone_outside_point():
    with pytest.raises(PointOutsideSet):
        normal_cone(HALF_LINE, (1, 0))


def test_intersection_rule_quadrants():
    rep = intersection_rule([HPolyhedron(2, [[-1, 0]], [0]), HPolyhedron(2, [[0, -1]], [0])], (0, 0))
    assert rep.equal and rep.qualification_holds
    assert set_equal(rep.lhs, VPolyhedron(2, [(0, 0)], [(-1, 0), (0, -1)]))


def test_intersection_rule_whole_spaces():
    rep = intersection_rule([HPolyhedron.whole(2)] * 2, (1, 1))
    assert rep.equal and rep.lhs.is_bounded


def test_intersection_rule_line_and_half_line():
    rep = intersection_rule([LINE, HALF_LINE], (0, 0))
    assert rep.equal and rep.qualification_holds


def test_subdifferential_of_abs():
    assert set_equal(subdifferential(ABS, (0,)), interval(-1, 1))
    assert set_equal(subdifferential(ABS, (1,)), VPolyhedron.singleton((1,)))


def test_subdifferential_of_affine_is_gradient():
    f = MaxAffineFunction.affine((2, -3), 5)
    for x in [(0, 0), (1, 7), (F(-1, 2), 3)]:
        assert set_equal(subdifferential(f, x), VPolyhedron.singleton((2, -3)))


def test_subdifferential_of_indicator_is_normal_cone():
    P = HPolyhedron(2, [[-1, 0], [0, -1], [1, 1]], [0, 0, 1])
    f = MaxAffineFunction.indicator(P)
    for x in dd_convert(P).points:
        assert set_equal(subdifferential(f, x), normal_cone(P, x).to_vpoly())


def test_subdifferential_outside_domain():
    f = MaxAffineFunction(1, [((1,), 0)], interval(0, 1))
    with pytest.raises(PointOutsideDomain):
        subdifferential(f, (2,))


def test_fermat():
    assert fermat_check(ABS, (0,))
    assert not fermat_check(ABS, (1,))
    assert not fermat_check(MaxAffineFunction.affine((1, 0)), (3, 3))


def test_sum_rule_abs_pair():
    shifted = MaxAffineFunction(1, [((1,), -1), ((-1,), 1)])
    rep = sum_rule([ABS, shifted], (0,))
    assert rep.equal
    assert set_equal(rep.lhs, interval(-2, 0))


def test_sum_rule_with_zero():
    zero = MaxAffineFunction.affine((0,))
    rep = sum_rule([ABS, zero], (0,))
    assert rep.equal and set_equal(rep.lhs, subdifferential(ABS, (0,)))


def test_sum_of_indicators_reproduces_intersection_rule():
    fs = [MaxAffineFunction.indicator(LINE), MaxAffineFunction.indicator(HALF_LINE)]
    rep = sum_rule(fs, (0, 0))
    ref = intersection_rule([LINE, HALF_LINE], (0, 0))
    assert rep.equal and set_equal(rep.lhs, ref.lhs)


def test_piece_cap():
    many = MaxAffineFunction(1, [((i,), 0) for i in range(101)])
    with pytest.raises(PieceCapExceeded):
        sum_function([many, many, many])


def test_chain_rule_hinge_of_sum():
    hinge = MaxAffineFunction(1, [((1,), 0), ((0,), 0)])
    rep = chain_rule_affine(hinge, AffineMap([[1, 1]]), (0, 0))
    assert rep.equal
    assert set_equal(rep.lhs, VPolyhedron(2, [(0, 0), (1, 1)]))


def test_chain_rule_identity():
    B = AffineMap([[1, 0], [0, 1]])
    f = MaxAffineFunction(2, [((1, 2), 0), ((-1, 0), 0)])
    rep = chain_rule_affine(f, B, (0, 0))
    assert rep.equal and set_equal(rep.lhs, subdifferential(f, (0, 0)))


def test_affine_graph_normal():
    C = affine_graph_normal(AffineMap([[2]]), (3,))
    expected = VPolyhedron(2, [(0, 0)], [], [(-2, 1)])
    assert set_equal(C.to_vpoly(), expected)
    for u, v in [(-2, 1), (4, -2)]:
        assert oracle_normal_membership((u, v), AffineMap([[2]]).graph(), (3, 6))


def test_max_rule_abs():
    rep = max_rule([MaxAffineFunction.affine((1,)), MaxAffineFunction.affine((-1,))], (0,))
    assert rep.equal and rep.details["active"] == [0, 1]
    assert set_equal(rep.lhs, interval(-1, 1))


def test_max_rule_drops_inactive():
    rep = max_rule([MaxAffineFunction.affine((1,)), MaxAffineFunction.affine((1,), -1)], (0,))
    assert rep.equal and rep.details["active"] == [0]
    assert set_equal(rep.rhs, VPolyhedron.singleton((1,)))


def test_max_rule_single_function():
    rep = max_rule([ABS], (0,))
    assert rep.equal


def test_max_rule_requires_interior():
    f = MaxAffineFunction(1, [((1,), 0)], interval(0, 1))
    with pytest.raises(ContinuityHypothesisUnverifiable):
        max_rule([f, ABS], (0,))


def test_subdiff_nonempty_on_ri():
    assert subdiff_nonempty_on_ri(MaxAffineFunction.indicator(interval(0, 1)))
    f = MaxAffineFunction(1, [((1,), 0), ((-1,), 0)], interval(0, 1))
    assert subdiff_nonempty_on_ri(f)
    assert set_equal(subdifferential(f, (F(1, 2),)), VPolyhedron.singleton((1,)))


def test_cone_sum_and_negation():
    C = Cone.sum(Cone(2, [(1, 0)]), Cone(2, [(0, 1)]))
    assert C.negated().generators == ((-1, 0), (0, -1))


@st.composite
def max_affine(draw, n=2):
    k = draw(st.integers(1, 4))
    pieces = [(draw(int_vectors(n)), draw(st.integers(-3, 3))) for _ in range(k)]
    dom = None
    if draw(st.booleans()):
        pts = draw(st.lists(int_vectors(n), min_size=1, max_size=4))
        dom = dd_convert_back(VPolyhedron(n, pts))
    return MaxAffineFunction(n, pieces, dom)


@given(max_affine(), st.data())
def test_epigraph_route_matches_closed_form(f, data):
    x = data.draw(st.sampled_from(dd_convert(f.domain).points))
    S = subdifferential(f, x)
    assert set_equal(S, closed_form_subdiff(f, x))
    for v in S.points:
        assert oracle_subgradient(v, f, x)


@given(max_affine(), st.data())
def test_epigraph_normals_point_downward(f, data):
    x = data.draw(st.sampled_from(dd_convert(f.domain).points))
    C = normal_cone(f.epigraph(), x + (f.value(x),))
    assert all(g[-1] <= 0 for g in C.generators)
    assert all(l[-1] == 0 for l in C.lineality)


@given(max_affine(), st.data())
def test_relative_interior_of_epigraph(f, data):
    candidates = list(dd_convert(f.domain).points) + [ri_point(f.domain).point]
    x = data.draw(st.sampled_from(candidates))
    fx = f.value(x)
    epi = f.epigraph()
    for lam in (fx, fx + F(1, 2)):
        assert ri_contains(epi, x + (lam,)) == (ri_contains(f.domain, x) and lam > fx)


@pytest.mark.parametrize("rule", ["intersection", "sum"])
def test_monotone_inclusion_without_qualification(rule):
    rep = run_fuzz(rule, 5, 25, (2, 2, 2), qualified=False)
    assert not rep.inclusion_failures

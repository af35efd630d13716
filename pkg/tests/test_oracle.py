import random
from fractions import Fraction as F

import pytest

from convexcalc.jsonio import dumps
from convexcalc.normals import MaxAffineFunction, subdifferential
from convexcalc.oracle import (
    RULES,
    InstanceSpec,
    closed_form_subdiff,
    gen_instance,
    oracle_normal_membership,
    oracle_subgradient,
    probe_points,
    run_fuzz,
    run_rule,
    verify_rule,
)
from convexcalc.polyhedron import HPolyhedron, dd_convert, negate, ri_intersection_nonempty, set_equal

HALF_LINE = HPolyhedron(2, [[1, 0]], [0], [[0, 1]], [0])
ABS = MaxAffineFunction(1, [((1,), 0), ((-1,), 0)])


def test_normal_membership_examples():
    assert oracle_normal_membership((0, 0), HALF_LINE, (0, 0))
    assert oracle_normal_membership((1, 7), HALF_LINE, (0, 0))
    assert not oracle_normal_membership((-1, 0), HALF_LINE, (0, 0))


def test_subgradient_examples():
    assert oracle_subgradient((F(1, 2),), ABS, (0,))
    assert not oracle_subgradient((2,), ABS, (0,))
    f = MaxAffineFunction.affine((3, -1), 2)
    assert oracle_subgradient((3, -1), f, (5, 5))


def test_closed_form_examples():
    assert set_equal(closed_form_subdiff(ABS, (0,)), HPolyhedron.box((-1,), (1,)))
    P = HPolyhedron(2, [[-1, 0], [0, -1]], [0, 0])
    # indicator of the nonnegative orthant: its subdifferential is the normal cone
    assert set_equal(closed_form_subdiff(MaxAffineFunction.indicator(P), (0, 0)), negate(dd_convert(P)))
    f = MaxAffineFunction.affine((1, 2))
    assert closed_form_subdiff(f, (0, 0)).points == ((1, 2),)


def test_generator_is_deterministic():
    spec = InstanceSpec(1)
    for rule in RULES:
        a = gen_instance(spec, rule, 3)
        b = gen_instance(spec, rule, 3)
        assert repr(a) == repr(b)


def test_polytope_pair_shares_anchor():
    inst = gen_instance(InstanceSpec(1), "intersection", 0)
    assert ri_intersection_nonempty(*inst["sets"])


def test_max_affine_instances_are_small():
    inst = gen_instance(InstanceSpec(2), "max", 0)
    assert all(len(f.pieces) <= 4 for f in inst["functions"])


def test_fuzz_reports_are_byte_identical():
    a = dumps(run_fuzz("sum", 13, 5))
    b = dumps(run_fuzz("sum", 13, 5))
    assert a == b


def test_vacuous_instance_is_skipped_not_failed():
    disjoint = {
        "rule": "sum",
        "functions": [
            MaxAffineFunction(1, [((1,), 0)], HPolyhedron.box((0,), (1,))),
            MaxAffineFunction(1, [((1,), 0)], HPolyhedron.box((2,), (3,))),
        ],
        "point": (F(0),),
    }
    res = verify_rule(disjoint)
    assert res.skipped and res.skipped.startswith("PointOutsideDomain")


def test_chain_rule_with_zero_map():
    from convexcalc.polyhedron import AffineMap

    for dom, expected in [(HPolyhedron.box((-1,), (1,)), True), (HPolyhedron.box((0,), (1,)), False)]:
        inst = {
            "rule": "chain",
            "function": MaxAffineFunction(1, [((1,), 0)], dom),
            "map": AffineMap([[0, 0]]),
            "point": (F(0), F(0)),
        }
        rep = run_rule(inst)
        assert rep.qualification_holds is expected
        assert rep.equal


@pytest.mark.parametrize("seed", [1, 2])
def test_probe_completeness(seed):
    """Oracle-accepted probe points lie in the emitted subdifferential."""
    rng = random.Random(seed)
    for t in range(10):
        inst = gen_instance(InstanceSpec(seed), "sum", t)
        f = inst["functions"][0]
        x = inst["point"]
        S = subdifferential(f, x)
        assert set_equal(S, closed_form_subdiff(f, x))
        for v in probe_points(S, rng):
            if oracle_subgradient(v, f, x):
                assert S.contains(v)
            else:
                assert not S.contains(v)

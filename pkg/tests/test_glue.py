import itertools

import pytest

from au.cantor.glue import (
    AGen,
    GlueOpen,
    GluePoint,
    YGen,
    certify_disjoint,
    closure_contains,
    closure_oracle,
    closure_tail_bound,
    cofinal_density_check,
    contains,
    glued_in_closure_set,
    hausdorff_witness,
    mk_open,
    random_open,
    random_point_inside,
    rc_intersection_witness,
)
from au.cantor.points import Box, random_box, random_y_point
from au.errors import EmptyOpen, MalformedGenerator, SamePoint
from au.seeding import generator

G = GluePoint.glued
Y = GluePoint.y


def ygen(mapping):
    return YGen(box=Box.of(mapping))


def test_mk_open():
    assert not mk_open([ygen({0: 1})]).is_empty
    with pytest.raises(MalformedGenerator):
        mk_open([AGen(alpha=2, m=2)])
    assert mk_open([]).is_empty
    assert len(mk_open([ygen({0: 1}), ygen({0: 1})]).generators) == 1


def test_open_codec():
    V = GlueOpen.parse("Y{0:1,3:0} | A(2;5)")
    assert str(V) == "Y{0:1,3:0} | A(2;5)"
    assert GlueOpen.parse("∅").is_empty
    assert str(G(3)) == "G:3"
    assert GluePoint.parse("Y:10+alt") == Y("10+alt")
    with pytest.raises(MalformedGenerator):
        GlueOpen.parse("A(3;2)")
    with pytest.raises(MalformedGenerator):
        GlueOpen.parse("B(1;2)")


def test_y_points_must_be_alt_tailed():
    with pytest.raises(ValueError):
        Y("1+zero")


def test_contains():
    assert contains(mk_open([ygen({0: 1})]), Y("1+alt"))
    V = mk_open([AGen(alpha=3, m=5)])
    assert contains(V, G(3))
    assert not contains(V, G(4))
    assert contains(mk_open([AGen(alpha=1, m=4)]), Y("01000+alt"))


def test_closure_contains():
    assert closure_contains(mk_open([ygen({0: 1})]), G(0))
    V = mk_open([ygen({3: 0})])
    assert not closure_contains(V, G(3))
    assert closure_contains(V, G(1))
    for gamma in (0, 1, 3):
        assert closure_contains(V, G(gamma)) == closure_oracle(V, gamma, 32)


def test_closure_contains_own_points():
    V = GlueOpen.parse("Y{1:1} | A(4;6)")
    assert closure_contains(V, G(4))
    assert closure_contains(V, Y("01+alt"))


def test_closure_tail_bound():
    assert closure_tail_bound(mk_open([ygen({0: 1, 4: 0})])) == 5
    assert closure_tail_bound(mk_open([YGen(box=Box())])) == 0
    assert closure_tail_bound(mk_open([AGen(alpha=2, m=6)])) == 7
    with pytest.raises(EmptyOpen):
        closure_tail_bound(mk_open([]))


def test_rc_intersection_witness():
    Vs = [mk_open([ygen({0: 1})]), mk_open([ygen({0: 0})])]
    assert rc_intersection_witness(Vs) == G(1)
    V = mk_open([AGen(alpha=2, m=6)])
    assert rc_intersection_witness([V]) == G(7)
    with pytest.raises(EmptyOpen):
        rc_intersection_witness([V, mk_open([])])


def test_hausdorff_witness_examples():
    left, right = hausdorff_witness(G(2), G(4))
    assert (str(left), str(right)) == ("A(2;5)", "A(4;5)")
    left, right = hausdorff_witness(Y("1+alt"), Y("0+alt"))
    assert (str(left), str(right)) == ("Y{0:1}", "Y{0:0}")
    left, right = hausdorff_witness(Y("+alt"), G(0))
    assert (str(left), str(right)) == ("Y{0:0,1:1}", "A(0;1)")
    left, right = hausdorff_witness(G(0), Y("+alt"))
    assert (str(left), str(right)) == ("A(0;1)", "Y{0:0,1:1}")
    with pytest.raises(SamePoint):
        hausdorff_witness(G(1), G(1))


def test_final_segment_law():
    rng = generator(0, 1)
    for _ in range(500):
        V = random_open(rng, 16)
        bound = closure_tail_bound(V)
        assert all(closure_contains(V, G(gamma)) for gamma in range(bound, 128))


def test_closure_agrees_with_oracle():
    rng = generator(0, 2)
    for _ in range(500):
        V = random_open(rng, 16)
        for gamma in range(20):
            assert closure_contains(V, G(gamma)) == closure_oracle(V, gamma, 20), (str(V), gamma)


def test_closure_on_y_is_the_trace():
    rng = generator(0, 3)
    for _ in range(50):
        V = random_open(rng, 12)
        for _ in range(100):
            y = Y(random_y_point(rng, 14))
            assert closure_contains(V, y) == contains(V, y)


def test_finite_au_law():
    rng = generator(0, 4)
    for _ in range(500):
        Vs = [random_open(rng, 10) for _ in range(int(rng.integers(1, 6)))]
        witness = rc_intersection_witness(Vs)
        assert witness.alpha <= 11
        assert all(closure_contains(V, witness) for V in Vs)


def test_hausdorff_pairs():
    rng = generator(0, 5)
    points = [G(alpha) for alpha in range(8)]
    points += list(dict.fromkeys(Y(random_y_point(rng, 12)) for _ in range(8)))
    for p, q in itertools.combinations(points, 2):
        V1, V2 = hausdorff_witness(p, q)
        assert contains(V1, p) and contains(V2, q)
        assert certify_disjoint(V1, V2)
        for _ in range(1000):
            assert not contains(V2, random_point_inside(rng, V1, 16))


def test_monotonicity():
    rng = generator(0, 6)
    for _ in range(100):
        V1 = random_open(rng, 12)
        V2 = mk_open([*V1.generators, YGen(box=random_box(rng, 12, max_size=3))])
        for gamma in range(16):
            if closure_contains(V1, G(gamma)):
                assert closure_contains(V2, G(gamma))


def test_glued_in_closure_set():
    V = mk_open([ygen({3: 0})])
    assert glued_in_closure_set(V, 6) == [0, 1, 2, 4, 5]


def test_cofinal_density():
    assert cofinal_density_check(Box.of({0: 1, 2: 0}), range(10))

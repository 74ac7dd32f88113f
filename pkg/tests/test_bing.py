from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from au.bing.qroot3 import Ordering, QRoot3, qr3_cmp, qr3_screen, rational_near, sqrt3_convergents
from au.bing.space import (
    AxisSystem,
    BingPoint,
    basic_neighbourhood,
    bing_au_witness,
    bing_closure_contains,
    bing_empty_triple,
    hulls_pairwise_disjoint,
    random_axis_system,
    triple_grid_search,
)
from au.errors import EmptySystem, MalformedGenerator
from au.seeding import generator

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=60)
qroots = st.builds(lambda a, b: QRoot3(a=a, b=b), rationals, rationals)

LEFT_FOOT = QRoot3(a=1, b=F(-1, 3))


def test_qr3_cmp_examples():
    assert qr3_cmp(LEFT_FOOT, F(3, 10)) is Ordering.GREATER
    assert qr3_cmp(LEFT_FOOT, F(1, 2)) is Ordering.LESS
    assert qr3_cmp(LEFT_FOOT, LEFT_FOOT) is Ordering.EQUAL
    assert str(Ordering.GREATER) == "greater"


def test_qroot3_arithmetic():
    x = QRoot3(a=1, b=1)
    assert x * x == QRoot3(a=4, b=2)
    assert x - x == QRoot3()
    assert QRoot3(a=0, b=1) * QRoot3(a=0, b=1) == QRoot3.rational(3)
    assert str(QRoot3(a=1, b=F(-1, 3))) == "1-1/3*sqrt3"


@given(qroots, qroots)
def test_qr3_cmp_is_antisymmetric(x, y):
    assert qr3_cmp(x, y) == Ordering(-qr3_cmp(y, x))


def test_screen_never_contradicts():
    rng = generator(0, 7)
    for _ in range(10_000):
        a, b, c, d = (F(int(n), int(q)) for n, q in zip(rng.integers(-100, 100, 4), rng.integers(1, 50, 4)))
        x, y = QRoot3(a=a, b=b), QRoot3(a=c, b=d)
        screened = qr3_screen(x, y)
        assert screened is None or screened is qr3_cmp(x, y)


def test_screen_is_undecided_on_equal_values():
    x = QRoot3(a=F(1, 3), b=F(2, 7))
    assert qr3_screen(x, x) is None


def test_convergents():
    head = [c for _, c in zip(range(5), sqrt3_convergents())]
    assert head == [F(1), F(2), F(5, 3), F(7, 4), F(19, 11)]


def test_rational_near():
    r = rational_near(LEFT_FOOT, F(1, 1000))
    assert abs(float(r) - LEFT_FOOT.to_float()) < 1e-3


def test_closure_examples():
    S = AxisSystem.of((F(3, 10), F(1, 2)))
    assert bing_closure_contains(S, BingPoint(a=1, b=1))
    assert bing_closure_contains(S, BingPoint(a=F(2, 5), b=0))
    assert not bing_closure_contains(S, BingPoint(a=5, b=1))
    # closed hull: endpoints are in the closure
    assert bing_closure_contains(S, BingPoint(a=F(1, 2), b=0))


def test_axis_system_codec_and_normalisation():
    S = AxisSystem.parse("[(2,3),(3/10,1/2),(1/4,2/5)]")
    assert str(S) == "[(1/4,1/2),(2,3)]"
    with pytest.raises(MalformedGenerator):
        AxisSystem.parse("(0,1)")
    with pytest.raises(MalformedGenerator):
        AxisSystem.parse("[(1,0)]")


@pytest.mark.parametrize(
    "text",
    ["[(0.5,1)]", "[(0,1),junk]", "[(0,1)(2,3]", "[(0,1)(2,3)]", "[(1/0,2)]", "[(0,1),]", "[(0,1)] extra"],
)
def test_axis_system_rejects_malformed_text(text):
    with pytest.raises(MalformedGenerator):
        AxisSystem.parse(text)


def test_axis_system_parses_empty_and_spaced_text():
    assert AxisSystem.parse("[]").is_empty
    assert AxisSystem.parse("  [ ( -1/2 , 1/2 ) ,(2, 3) ] ") == AxisSystem.of((F(-1, 2), F(1, 2)), (2, 3))


def test_negative_height_rejected():
    with pytest.raises(ValueError):
        BingPoint(a=0, b=-1)


def test_witness_examples():
    S1 = AxisSystem.of((F(-1, 10), F(1, 10)))
    S2 = AxisSystem.of((F(29, 10), F(31, 10)))
    p = bing_au_witness(S1, S2)
    assert p.b > 0
    assert abs(p.a - F(3, 2)) < F(1, 10)
    assert bing_closure_contains(S1, p) and bing_closure_contains(S2, p)

    S = AxisSystem.of((0, 1))
    p = bing_au_witness(S, S)
    assert bing_closure_contains(S, p)
    with pytest.raises(EmptySystem):
        bing_au_witness(S, AxisSystem())


def test_witness_property_run():
    rng = generator(9, 10)
    for _ in range(200):
        S1, S2 = random_axis_system(rng), random_axis_system(rng)
        p = bing_au_witness(S1, S2)
        assert bing_closure_contains(S1, p) and bing_closure_contains(S2, p)


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1))
def test_closure_is_monotone(seed):
    rng = generator(seed)
    S, extra = random_axis_system(rng), random_axis_system(rng)
    p = BingPoint(a=F(int(rng.integers(-200, 200)), 10), b=F(int(rng.integers(0, 100)), 10))
    if bing_closure_contains(S, p):
        assert bing_closure_contains(S.union(extra), p)


def test_basic_neighbourhood_surrounds_feet():
    p = BingPoint(a=1, b=1)
    N = basic_neighbourhood(p, F(1, 10))
    assert len(N.intervals) == 2
    assert bing_closure_contains(N, p)


def test_midpoint_is_inside():
    S = AxisSystem.of((F(1, 3), F(1, 2)), (4, 5))
    assert bing_closure_contains(S, S.midpoint())


def test_empty_triple():
    cert = bing_empty_triple(50)
    assert cert.hulls_disjoint and cert.pigeonhole
    assert cert.grid_hits == ()
    assert cert.triple_empty
    for (i, j), w in zip([(0, 1), (0, 2), (1, 2)], cert.pairwise):
        assert bing_closure_contains(cert.systems[i], w)
        assert bing_closure_contains(cert.systems[j], w)


def test_coarse_triple_grid():
    assert bing_empty_triple(1).triple_empty


def test_grid_search_finds_common_points():
    S1 = AxisSystem.of((0, 1))
    S2 = AxisSystem.of((2, 3))
    hits = triple_grid_search([S1, S2], 4)
    assert hits
    assert all(bing_closure_contains(S1, p) and bing_closure_contains(S2, p) for p in hits)


def test_overlapping_hulls_are_not_disjoint():
    assert not hulls_pairwise_disjoint([AxisSystem.of((0, 2)), AxisSystem.of((1, 3))])

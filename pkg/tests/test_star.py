import numpy as np
import pytest

from au.errors import BadSchedule, IllFormedSelector, MalformedFragment, SamePoint, TransversalDeficit
from au.seeding import generator
from au.star.fragment import (
    EpsSelector,
    StarFragment,
    cohen_fragment,
    constant_fragment,
    dyadicity_check,
    fragment_dump,
    fragment_load,
    random_cells,
    random_selector,
)
from au.star.strong import (
    cofinal_schedule,
    inequivalent_on_shadow,
    separation_check,
    shadow_classes,
    strongify_case1,
    strongify_case2,
    symmetric_difference,
)
from au.star.topology import star_topology_closure


@pytest.fixture(scope="module")
def f42():
    return cohen_fragment(64, 8, seed=42)


def test_cohen_fragment_partition_and_determinism():
    f = cohen_fragment(8, 2, seed=1)
    assert f.partition_holds()
    assert f == cohen_fragment(8, 2, seed=1)
    tiny = cohen_fragment(1, 3, seed=0)
    assert tiny.part(0, 0) == [] and tiny.part(0, 1) == []


def test_distinct_seeds_differ():
    for seed in range(10):
        a, b = cohen_fragment(16, 2, seed), cohen_fragment(16, 2, seed + 100)
        assert not np.array_equal(a.table, b.table)


def test_parts_partition_each_level(f42):
    for alpha in range(f42.K):
        zero, one = set(f42.part(alpha, 0)), set(f42.part(alpha, 1))
        assert not zero & one
        assert zero | one == set(f42.cells(alpha))


def test_table_outside_the_levels_is_rejected():
    table = np.zeros((4, 4, 1), dtype=bool)
    table[1, 2, 0] = True
    with pytest.raises(ValueError):
        StarFragment(K=4, M=1, table=table)


def test_selector_validation():
    assert str(EpsSelector.of({50: 0, 40: 1})) == "{40:1,50:0}"
    with pytest.raises(IllFormedSelector):
        EpsSelector.of({3: 2})


def test_dyadicity_examples(f42):
    rng = generator(42, 1)
    S = random_cells(rng, 32, 8, 128)
    assert dyadicity_check(f42, S, {}, 0) == (128, True)
    count, passed = dyadicity_check(f42, S, {40: 1, 50: 0}, 1)
    assert passed and 0 < count < 128
    assert not dyadicity_check(f42, S, {}, 129)[1]


def test_dyadicity_rejects_late_cells(f42):
    with pytest.raises(IllFormedSelector):
        dyadicity_check(f42, [(45, 0)], {40: 1}, 1)
    with pytest.raises(IllFormedSelector):
        dyadicity_check(f42, [(1, 0)], {64: 1}, 1)


def test_dyadicity_sweep(f42):
    rng = generator(42, 2)
    for _ in range(100):
        S = random_cells(rng, 32, 8, 128)
        eps = random_selector(rng, 32, 64, 3)
        assert dyadicity_check(f42, S, eps, 1)[1], str(eps)


def test_case1_example():
    f = cohen_fragment(40, 1, seed=3)
    g = strongify_case1(f, {(3, 5, 0): 37})
    assert g.zero(37, (3, 0)) and not g.zero(37, (5, 0))
    found = separation_check(g, (3, 0), (5, 0), 30)
    assert found is not None and found <= 37
    assert strongify_case1(f, {}) == f


def test_case1_bounds_and_separation():
    f = cohen_fragment(64, 1, seed=11)
    rng = generator(11, 3)
    pairs = set()
    while len(pairs) < 20:
        a, b = (int(x) for x in rng.choice(32, size=2, replace=False))
        pairs.add((a, b))
    schedule = cofinal_schedule(64, sorted(pairs), floor=32)
    g = strongify_case1(f, schedule)
    assert g.partition_holds()
    assert all(symmetric_difference(f, g, alpha) <= 2 for alpha in range(64))
    for (zeta, xi, _), alpha in schedule.items():
        found = separation_check(g, (zeta, 0), (xi, 0), 32)
        assert found is not None and found <= alpha


def test_bad_schedules():
    f = cohen_fragment(16, 1, seed=0)
    with pytest.raises(BadSchedule):
        strongify_case1(f, {(3, 5, 0): 5})
    with pytest.raises(BadSchedule):
        strongify_case1(f, {(3, 5, 0): 9, (1, 2, 0): 9})
    with pytest.raises(BadSchedule):
        strongify_case1(f, {(3, 3, 0): 9})
    with pytest.raises(BadSchedule):
        strongify_case1(cohen_fragment(16, 2, seed=0), {(3, 5, 0): 9})
    with pytest.raises(BadSchedule):
        cofinal_schedule(8, [(1, 2)], copies=7)


def test_cofinal_schedule_is_injective():
    schedule = cofinal_schedule(64, [(1, 2), (2, 1), (5, 9)], copies=3, floor=10)
    assert len(set(schedule.values())) == 9
    assert min(schedule.values()) >= 10


def test_separation_on_constant_table():
    f = constant_fragment(16, 2)
    assert separation_check(f, (0, 0), (3, 1), 5) is None
    with pytest.raises(SamePoint):
        separation_check(f, (1, 0), (1, 0), 5)


def test_case2_constant_table():
    f = constant_fragment(16, 4)
    out, report = strongify_case2(f, 4)
    assert report.classes == 1
    assert report.transversal == [(0, 0)]
    assert report.deficit_columns == [0, 1, 2, 3]
    assert out == f
    with pytest.raises(TransversalDeficit) as e:
        strongify_case2(f, 4, strict=True)
    assert e.value.columns == [0, 1, 2, 3]


def test_case2_generic_table():
    f = cohen_fragment(32, 4, seed=7)
    out, report = strongify_case2(f, 8)
    assert report.max_class_size <= 2
    assert out == f and out.table is not f.table
    assert sum(int(size) * count for size, count in report.class_sizes.items()) == 8 * 4
    assert out.partition_holds()
    assert inequivalent_on_shadow(f, 8, report.transversal)
    assert len(shadow_classes(f, 8)) == report.classes


def test_case2_needs_two_fibers():
    with pytest.raises(ValueError):
        strongify_case2(cohen_fragment(8, 1, seed=0), 2)


def test_tail_closure_reference():
    f = cohen_fragment(64, 4, seed=7)
    S = random_cells(generator(7, 4), 32, 4, 64)
    report = star_topology_closure(f, 0, S, 32, 2)
    assert report.passed
    assert report.least_failing is None
    assert report.checked == 32 * 4


def test_tail_closure_depth_zero_and_empty_sample():
    f = cohen_fragment(16, 2, seed=1)
    assert star_topology_closure(f, 0, [(0, 0)], 8, 0).passed
    report = star_topology_closure(f, 0, [], 8, 1)
    assert len(report.failing) == 8 * 2
    assert report.least_failing.cell == (8, 0)
    assert report.least_failing.selector == []


def test_tail_closure_reports_least_failure():
    f = constant_fragment(16, 2)
    # every tail cell agrees with the constant table, so a single cell is dense
    assert star_topology_closure(f, 0, [(0, 0)], 8, 2).passed
    g = cohen_fragment(16, 2, seed=5)
    report = star_topology_closure(g, 1, [(0, 0)], 8, 3)
    if not report.passed:
        failure = report.least_failing
        assert failure.cell == report.failing[0]
        gamma, zeta = failure.cell
        assert all(alpha > gamma for alpha, _ in failure.selector)
        # the cell lies in its own neighbourhood, the sample does not
        assert all(g.zero(alpha, failure.cell) == (bit == 0) for alpha, bit in failure.selector)
        assert not all(g.zero(alpha, (0, 0)) == (bit == 0) for alpha, bit in failure.selector)


def test_tail_closure_rejects_late_samples():
    with pytest.raises(ValueError):
        star_topology_closure(cohen_fragment(8, 1, seed=0), 0, [(5, 0)], 4, 1)


def test_dump_load(f42):
    text = fragment_dump(f42)
    assert text.splitlines()[0] == "64 8 42"
    assert fragment_load(text) == f42
    tiny = constant_fragment(3, 1)
    assert fragment_dump(tiny).splitlines() == ["3 1 -", "00", "01", "03"]


def test_load_rejects_garbage():
    with pytest.raises(MalformedFragment):
        fragment_load("3 1")
    with pytest.raises(MalformedFragment):
        fragment_load("2 1 0\n00\nzz\n")
    with pytest.raises(MalformedFragment):
        fragment_load("2 1 0\n01\n00\n")

from fractions import Fraction as F

import pytest

from au.errors import VerificationFailure
from au.reaping.enumsets import (
    co_reciprocals,
    dyadic_base,
    evens,
    from_generator,
    naturals,
    primes,
    progression,
    reciprocals,
    split_counts,
    unit_rationals,
)
from au.reaping.extension import (
    RoundRobinReaper,
    accumulation_progress,
    chain_extensions,
    check_dense_trace,
    closure_progress,
    hausdorff_separator,
    reap,
    run_one_step,
    selectors,
    split_all,
)


@pytest.fixture(scope="module")
def reference():
    U = unit_rationals()
    return run_one_step(
        U,
        reciprocals(),
        co_reciprocals(),
        pairs=[],
        stages=4,
        base=dyadic_base(U, 3),
        budget=16,
    )


def small_instance(stages=3, pairs=()):
    N = naturals()
    base = [progression(N, r, 3) for r in range(3)]
    return run_one_step(N, evens(N), progression(N, 1, 4), list(pairs), stages, base, budget=8)


def test_split_all_splits_every_member():
    N = naturals()
    family = [evens(N), primes(N)]
    D = split_all(family, 16)
    for C in family:
        inside, outside = split_counts(C, D, 64)
        assert inside >= 16 and outside >= 16


def test_split_all_without_family_alternates():
    N = naturals()
    assert split_all([], 4, ground=N).take(5) == [0, 2, 4, 6, 8]


def test_split_all_avoids_forbidden():
    N = naturals()
    D = split_all([evens(N)], 8, forbidden=0, ground=N)
    assert 0 not in D
    assert D.take(8)


def test_reaper_decides_every_ground_element():
    N = naturals()
    reaper = RoundRobinReaper([evens(N)], N, budget=8)
    decisions = [reaper.member(x) for x in range(50)]
    assert any(decisions) and not all(decisions)
    assert not reaper.member(-3)
    assert reaper.decisions >= 32


def test_reaper_membership_ignores_query_order():
    N = naturals()
    a = RoundRobinReaper([primes(N)], N, budget=4, key="0:D")
    b = RoundRobinReaper([primes(N)], N, budget=4, key="0:D")
    far = list(range(1000, 1100))
    forward = [a.member(x) for x in far]
    backward = [b.member(x) for x in reversed(far)]
    assert forward == backward[::-1]
    assert any(forward) and not all(forward)


def test_reap_reports_unsplit_members():
    N = naturals()
    small = from_generator("small", lambda: iter([1, 2, 3]), lambda x: x in (1, 2, 3))
    D, unsplit = reap([evens(N), small], 4, ground=N)
    assert unsplit == ["small"]
    inside, outside = split_counts(evens(N), D, 16)
    assert inside >= 4 and outside >= 4
    with pytest.raises(VerificationFailure, match="small"):
        split_all([evens(N), small], 4, ground=N)


def test_split_all_on_overlapping_rational_family():
    U = unit_rationals()
    family = [*dyadic_base(U, 3), reciprocals(), co_reciprocals()]
    D = split_all(family, 16, forbidden=U.nth(0), ground=U)
    for C in family:
        inside, outside = split_counts(C, D, 64)
        assert inside >= 16 and outside >= 16, C.name


def test_reference_ladders(reference):
    r = reference
    assert len(r.ladders) == 4
    assert r.families[0] == 17
    for m, D in enumerate(r.ladders):
        assert not D.member(r.ground.nth(m))
        assert r.stages[m].forbidden_excluded
    for m in range(3):
        assert r.families[m + 1] == r.families[m] + 2 * r.stages[m].survivors
    assert r.subbase[0] == "τ" and len(r.subbase) == 9


def test_reference_closure_progress(reference):
    assert closure_progress(reference, reference.I, 8, 512)
    assert closure_progress(reference, reference.J, 8, 512)
    assert closure_progress(reference, reference.I, 0, 512)


def test_reference_dense_traces(reference):
    assert check_dense_trace(reference, reference.I, {0: 1, 1: 0}, 4, 512)
    for C in reference.initial_family:
        for eps in selectors(4, 3):
            assert check_dense_trace(reference, C, eps, 1, 512), (C.name, eps)


def test_reference_separates_forbidden_points(reference):
    for n in range(4):
        assert hausdorff_separator(reference, reference.ground.nth(n)) == n
    assert hausdorff_separator(reference, F(1, 1000)) is None
    assert hausdorff_separator(reference, "outside") == 0


def test_empty_selector_counts_the_set(reference):
    assert check_dense_trace(reference, reference.J, {}, 16, 16)
    assert not check_dense_trace(reference, reference.J, {}, 17, 16)


def test_selector_out_of_range(reference):
    with pytest.raises(ValueError):
        check_dense_trace(reference, reference.I, {7: 1}, 1, 64)


def test_single_stage():
    r = small_instance(stages=1)
    assert len(r.ladders) == 1
    assert r.families == [len(r.initial_family)]


def test_zero_stages_is_vacuous():
    r = small_instance(stages=0)
    assert r.ladders == []
    assert closure_progress(r, r.I, 8, 64)
    assert hausdorff_separator(r, 0) is None


def test_third_point_is_avoided():
    r = small_instance(stages=3)
    assert not r.ladders[2].member(2)


def test_selectors():
    assert len(list(selectors(4, 2))) == 1 + 8 + 24
    assert list(selectors(0, 3)) == [{}]


def test_accumulation_progress():
    N = naturals()
    r = small_instance(stages=3, pairs=[(5, evens(N))])
    assert accumulation_progress(r, 5, evens(N), depth=2, t=1, scan=512)
    assert accumulation_progress(r, "outside", evens(N), depth=2, t=1, scan=512)


def test_determinism():
    a, b = small_instance(), small_instance()
    assert [D.take(8) for D in a.ladders] == [D.take(8) for D in b.ladders]


def test_chain_extensions():
    N = naturals()
    base = [progression(N, r, 3) for r in range(3)]
    steps = [(evens(N), progression(N, 1, 2), []), (progression(N, 0, 5), primes(N), [])]
    results = chain_extensions(N, steps, stages=2, base=base, budget=8)
    assert [r.new_point for r in results] == ["p0", "p1"]
    assert len(results[1].base) == len(base) + 4


def test_stage_verdicts_record_splitting(reference):
    for verdict in reference.stages:
        assert verdict.splits_all and verdict.unsplit == []
    halves = reference.family[1][reference.families[0]:]
    D = reference.ladders[1]
    for C in halves:
        inside, outside = split_counts(C, D, 64)
        assert inside >= 16 and outside >= 16, C.name


def assert_ladder(r, stages):
    assert len(r.ladders) == stages
    for m, D in enumerate(r.ladders):
        assert not D.member(r.ground.nth(m))
        verdict = r.stages[m]
        assert verdict.forbidden_excluded
        assert verdict.splits_all, (m, verdict.unsplit)
    for m in range(stages - 1):
        assert r.families[m + 1] == r.families[m] + 2 * r.stages[m].survivors


def test_reference_instance_six_stages():
    U = unit_rationals()
    r = run_one_step(U, reciprocals(), co_reciprocals(), [], 6, dyadic_base(U, 3), budget=16)
    assert_ladder(r, 6)
    assert closure_progress(r, r.I, 4, 1024)
    assert closure_progress(r, r.J, 4, 1024)


@pytest.mark.parametrize("stages", [1, 2, 5, 8])
def test_naturals_instance_up_to_eight_stages(stages):
    N = naturals()
    base = [progression(N, r, 3) for r in range(3)]
    r = run_one_step(N, evens(N), progression(N, 1, 4), [], stages, base, budget=2)
    assert_ladder(r, stages)
    assert closure_progress(r, r.I, 2, 1 << 14)

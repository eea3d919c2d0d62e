from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from kn_osss.measures import Configuration, KOutOfN, default_event_suite
from kn_osss.percolation import (
    ExplorationTree,
    batch_crossings,
    batch_vertical_vacant_crossings,
    build_box,
    check_exploration_agreement,
    count_zero_pivotal,
    crossing_event,
    crossing_probability,
    crossing_probability_exact,
    crossing_probability_exact_curve,
    discrete_derivative,
    discrete_derivative_exact,
    duality_holds,
    exploration_tree,
    explore,
    four_arm_witness,
    has_horizontal_crossing,
    has_vertical_vacant_crossing,
    mean_zero_pivotal,
    mean_zero_pivotal_exact,
    minimal_tau,
    one_arm_estimate,
    one_arm_exact,
    osss_averaged_bound_check,
    pivotal_scaling_experiment,
    revealment_profile,
    russo_check,
    zero_pivotal_sites,
)
from kn_osss.percolation import exploration
from kn_osss.trees import fixed_order, run_tree
from kn_osss.utils.errors import ElementIndexError, ParameterError, ResourceCapError


def sites(*vs: int) -> int:
    bits = 0
    for v in vs:
        bits |= 1 << v
    return bits


# ==================== 盒子 ====================


def test_box_r2():
    box = build_box(2)
    assert box.n == 4
    assert sorted(box.edges()) == [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]
    assert box.left == {0, 2} and box.right == {1, 3}
    assert box.bottom == {0, 1} and box.top == {2, 3}
    assert box.coords(3) == (1, 1)


def test_box_degrees():
    box = build_box(3)
    assert box.degree(box.index(1, 1)) == 6
    assert box.degree(box.index(0, 0)) == 2
    assert box.degree(box.index(2, 0)) == 3
    assert len(box.edges()) == 2 * 3 * 2 + 2 * 2


def test_box_errors():
    with pytest.raises(ParameterError):
        build_box(0)
    with pytest.raises(ElementIndexError):
        build_box(2).index(2, 0)


def test_box_conversions():
    box = build_box(2)
    grid = box.to_grid(sites(0, 3))
    assert grid.tolist() == [[True, False], [False, True]]
    assert box.to_bits(grid) == sites(0, 3)
    assert box.to_bits(Configuration.from_string("1001")) == sites(0, 3)


# ==================== 穿越 ====================


@pytest.mark.parametrize("occupied, expected", [
    ((0, 1), True),
    ((1, 2), True),
    ((2, 3), True),
    ((0, 3), False),
    ((0, 2), False),
    ((1, 3), False),
    ((), False),
    ((0, 1, 2, 3), True),
])
def test_crossing_r2(occupied, expected):
    box = build_box(2)
    assert has_horizontal_crossing(box, sites(*occupied)) == expected
    assert duality_holds(box, sites(*occupied))


def test_duality_all_r3():
    box = build_box(3)
    for bits in range(2 ** box.n):
        assert has_horizontal_crossing(box, bits) != has_vertical_vacant_crossing(box, bits)


def test_batch_matches_union_find():
    box = build_box(5)
    rng = np.random.default_rng(0)
    grids = rng.random((300, 5, 5)) < 0.5
    crossing = batch_crossings(grids)
    vacant = batch_vertical_vacant_crossings(grids)
    for grid, a, b in zip(grids, crossing, vacant):
        assert a == has_horizontal_crossing(box, grid)
        assert b == has_vertical_vacant_crossing(box, grid)
    assert (crossing != vacant).all()


def test_zero_pivotal_example():
    box = build_box(2)
    assert zero_pivotal_sites(box, sites(0, 3)) == [1, 2]
    assert count_zero_pivotal(box, sites(0, 3)) == 2
    assert count_zero_pivotal(box, sites(0, 1)) == 0


def test_zero_pivotal_methods_agree():
    box = build_box(4)
    rng = np.random.default_rng(2)
    measure = KOutOfN(16, 8)
    for bits in measure.iter_sample_bits(rng, 300):
        assert count_zero_pivotal(box, bits, "flip") == count_zero_pivotal(box, bits, "labels")
    with pytest.raises(ParameterError):
        count_zero_pivotal(box, 0, "guess")


def test_four_arm_witness_equivalence():
    box = build_box(3)
    for bits in range(2 ** box.n):
        pivotal = set(zero_pivotal_sites(box, bits))
        for v in range(box.n):
            if not (bits >> v) & 1:
                assert four_arm_witness(box, bits, v) == (v in pivotal)


def test_four_arm_witness_requires_vacant():
    with pytest.raises(ParameterError):
        four_arm_witness(build_box(2), sites(0), 0)


def test_crossing_event_is_increasing_event():
    box = build_box(2)
    event = crossing_event(box)
    assert event.n == 4
    assert event.contains_bits(sites(1, 2))
    assert list(event.zero_pivotals(sites(0, 3))) == [1, 2]


# ==================== 探索树 ====================


@pytest.mark.parametrize("R", [2, 4])
def test_exploration_agreement_exhaustive(R):
    box = build_box(R)
    configurations = range(2 ** box.n) if R == 2 else KOutOfN(box.n, box.n // 2).enumerate_bits()
    report = check_exploration_agreement(box, list(configurations), with_tree=(R == 2), workers=2)
    assert report.checked == (16 if R == 2 else 12870)
    assert report.holds


def test_exploration_agreement_flags_tree_with_wrong_order(monkeypatch):
    def reversed_order(box, y0):
        return ExplorationTree(box, y0, fixed_order(reversed(range(box.n))))

    monkeypatch.setattr(exploration, "exploration_tree", reversed_order)
    box = build_box(2)
    report = check_exploration_agreement(box, list(range(2 ** box.n)), with_tree=True)
    assert report.mismatches == 0
    assert report.tree_mismatches > 0
    assert not report.holds


def test_exploration_agreement_sampled():
    box = build_box(8)
    rng = np.random.default_rng(3)
    configurations = list(KOutOfN(64, 32).iter_sample_bits(rng, 200))
    assert check_exploration_agreement(box, configurations).holds


def test_exploration_starts_at_anchor():
    box = build_box(4)
    rng = np.random.default_rng(4)
    for bits in KOutOfN(16, 8).iter_sample_bits(rng, 20):
        for y0 in range(4):
            result = explore(box, bits, y0)
            assert result.examined[0] == box.index(3, y0)
            assert len(set(result.examined)) == len(result.examined)


def test_exploration_tree_tau_matches_minimal_prefix():
    box = build_box(2)
    event = crossing_event(box)
    for occupied in combinations(range(4), 2):
        omega = Configuration(4, sites(*occupied))
        for y0 in range(2):
            tree = exploration_tree(box, y0)
            assert tree.tree.first == tree.anchor
            transcript = run_tree(tree.tree, event, omega)
            examined = explore(box, omega, y0).examined
            assert transcript.decision == has_horizontal_crossing(box, omega)
            assert transcript.tau == minimal_tau(box, omega, examined)
            assert transcript.order == examined[:transcript.tau]


def test_exploration_bad_anchor():
    with pytest.raises(ElementIndexError):
        explore(build_box(2), 0, 2)


# ==================== 穿越概率与导数 ====================


def test_crossing_probability_exact_r2():
    assert crossing_probability_exact(2, 2) == Fraction(1, 2)
    assert crossing_probability_exact(2, 4) == 1
    assert crossing_probability_exact_curve(2) == [0, 0, Fraction(1, 2), 1, 1]


def test_crossing_probability_half_r4():
    assert crossing_probability_exact(4, 8) == Fraction(1, 2)


def test_crossing_probability_mc():
    est = crossing_probability(4, 8, engine="mc", samples=20_000, seed=5, workers=2)
    assert est.within(0.5, 4.0)
    with pytest.raises(ParameterError):
        crossing_probability(4, 8, engine="magic")


def test_crossing_probability_cap():
    with pytest.raises(ResourceCapError):
        crossing_probability_exact(6, 18, cap=1000)
    with pytest.raises(ResourceCapError):
        crossing_probability_exact_curve(4, cap=1000)


def test_mean_zero_pivotal():
    assert mean_zero_pivotal_exact(2, 2) == 1
    est = mean_zero_pivotal(2, 2, 2_000, seed=1)
    assert est.within(1.0, 4.0)


def test_discrete_derivative():
    exact = discrete_derivative_exact(2)
    assert exact.direct == exact.via_pivotals == 2
    assert exact.holds
    assert discrete_derivative_exact(4).holds
    est = discrete_derivative(2, 2_000, seed=1)
    assert est.k == 2
    assert est.derivative.mean == pytest.approx(2 * est.mean_pivotals.mean)


def test_russo_check_crossing():
    box = build_box(2)
    event = crossing_event(box)
    report = russo_check(event, 4, 2)
    assert report.lhs == Fraction(1, 2)
    assert report.expected_pivotals == 1
    assert report.holds
    for k in range(4):
        assert russo_check(event, 4, k).holds
    with pytest.raises(ParameterError):
        russo_check(event, 4, 4)


@pytest.mark.slow
def test_russo_check_event_suite_n10():
    for event in default_event_suite(10, 8, seed=5):
        for k in range(10):
            report = russo_check(event, 10, k)
            assert report.holds, (event.name, k)


# ==================== 标度与揭示 ====================


def test_pivotal_scaling_small():
    result = pivotal_scaling_experiment([4, 2], 2_000, seed=1)
    assert [row.R for row in result.rows] == [2, 4]
    assert [row.k for row in result.rows] == [2, 8]
    assert result.rows[0].estimate.within(1.0, 4.0)
    assert result.increasing
    assert result.fit is not None
    assert len(result.separations) == 1


def test_pivotal_scaling_is_deterministic():
    a = pivotal_scaling_experiment([2, 4], 1_000, seed=9, workers=1)
    b = pivotal_scaling_experiment([4, 2], 1_000, seed=9, workers=1)
    assert [r.estimate.mean for r in a.rows] == [r.estimate.mean for r in b.rows]


def test_pivotal_scaling_rejects_odd_R():
    with pytest.raises(ParameterError):
        pivotal_scaling_experiment([3], 10)


def test_revealment_profile_r2():
    profile = revealment_profile(2, 500, seed=2)
    assert profile.averaged.shape == (2, 2)
    assert sum(profile.anchor_samples) == 500
    for a, y0 in enumerate(profile.anchors):
        assert profile.per_anchor[a][y0, 1] == 1.0
    assert 0 < profile.max_averaged <= 1.0


@pytest.mark.slow
def test_revealment_decreases_with_box_size():
    maxima = [revealment_profile(R, 2_000, seed=R, workers=4).max_averaged for R in (8, 16, 32)]
    assert maxima[0] > maxima[1] > maxima[2]


# ==================== 单臂与平均界 ====================


def test_one_arm_exact_m1():
    bernoulli, fixed = one_arm_exact(1)
    assert bernoulli == Fraction(63, 128)
    assert fixed == Fraction(4, 9)
    assert fixed <= 2 * bernoulli
    with pytest.raises(ResourceCapError):
        one_arm_exact(2)


def test_one_arm_estimate_m1():
    result = one_arm_estimate(1, 10_000, seed=3)
    assert result.n == 9 and result.k == 4
    assert result.bernoulli.within(63 / 128, 4.0)
    assert result.fixed_k.within(4 / 9, 4.0)
    assert result.holds()


@pytest.mark.slow
@pytest.mark.parametrize("M", [2, 4])
def test_one_arm_fixed_k_bounded_by_bernoulli(M):
    result = one_arm_estimate(M, 20_000, seed=M, workers=4)
    assert result.n == (2 * M + 1) ** 2
    assert result.k == result.n // 2
    assert result.holds()


def test_averaged_bound_r2_exact():
    report = osss_averaged_bound_check(2)
    assert report.mode == "exact"
    assert len(report.reports) == 2
    assert all(r.lhs == Fraction(1, 4) for r in report.reports)
    assert report.holds_at == {"20": True}
    assert report.averaged_ratio <= 20


def test_averaged_bound_r4_mc():
    report = osss_averaged_bound_check(4, samples=300, seed=6, anchors=[0, 3])
    assert report.mode == "monte-carlo"
    assert [r.tree for r in report.reports] == ["exploration_R4_y0", "exploration_R4_y3"]
    assert report.reports[0].lhs == 0.25
    assert report.holds_at["20"]


@pytest.mark.slow
def test_pivotal_scaling_desktop():
    result = pivotal_scaling_experiment([8, 16, 32], 20_000, seed=1, workers=4)
    assert result.increasing
    assert result.separated(3.0)
    assert result.fit.slope > 0

import math
from fractions import Fraction

import numpy as np
import pytest

from kn_osss.measures import KOutOfN, always_true, default_event_suite, dictator, majority, tribes
from kn_osss.osss import orders_to_matrix, report_from_samples, search_constant, verify_osss
from kn_osss.osss.report import constant_key
from kn_osss.trees import default_tree_suite, first_query, fixed_order, random_order
from kn_osss.utils.errors import DimensionError, ParameterError, ResourceCapError


def test_constant_key():
    assert constant_key(20) == "20"
    assert constant_key(20.0) == "20"
    assert constant_key(2.5) == "2.5"


# ==================== 精确引擎 ====================


def test_dictator_first_query():
    report = verify_osss(dictator(10, 0), first_query(10, 0), KOutOfN(10, 5), constants=[20, 1])
    assert report.mode == "exact"
    assert report.lhs == Fraction(1, 4)
    assert report.weighted_term == Fraction(1, 2)
    assert report.average_term == Fraction(1, 20)
    assert report.rhs_bracket == Fraction(11, 20)
    assert report.ratio == Fraction(5, 11)
    assert report.holds_at == {"20": True, "1": True}
    assert report.c20_applicable


def test_trivial_event_is_degenerate():
    report = verify_osss(always_true(10), fixed_order(range(10)), KOutOfN(10, 5))
    assert report.lhs == 0
    assert report.degenerate
    assert report.ratio == 0
    assert report.holds_for(20)


@pytest.mark.parametrize("event", [majority(10, 5), majority(10, 6), tribes(10, 2), tribes(10, 5)])
def test_symmetric_events_within_constant(event):
    measure = KOutOfN(10, 5)
    for tree in default_tree_suite(10, 3, seed=11):
        report = verify_osss(event, tree, measure)
        assert report.ratio <= 20
        assert report.holds_at["20"]


def test_unknown_engine():
    with pytest.raises(ParameterError):
        verify_osss(dictator(4, 0), first_query(4, 0), KOutOfN(4, 2), engine="magic")


def test_mc_needs_samples():
    with pytest.raises(ParameterError):
        verify_osss(dictator(4, 0), first_query(4, 0), KOutOfN(4, 2), engine="mc")


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        verify_osss(dictator(4, 0), first_query(5, 0), KOutOfN(4, 2))


def test_exact_cap():
    with pytest.raises(ResourceCapError):
        verify_osss(dictator(10, 0), first_query(10, 0), KOutOfN(10, 5), cap=100)


# ==================== 常数搜索 ====================


def test_search_constant_single_instance():
    result = search_constant(
        event_suite=lambda n: [dictator(n, 0)],
        tree_suite=lambda n: [first_query(n, 0)],
        measure_grid=[KOutOfN(10, 5)],
        constants=[20.0],
    )
    assert len(result.rows) == 1
    assert result.global_max == Fraction(5, 11)
    assert result.max_by_measure == {"10,5": Fraction(5, 11)}
    assert result.by_epsilon["0.5"] == Fraction(5, 11)
    assert result.holds_at == {"20": True}
    assert result.worst.event == "dictator[0]"


def test_search_constant_grid():
    grid = [KOutOfN(8, k) for k in range(1, 8)]
    result = search_constant(
        event_suite=lambda n: default_event_suite(n, 12, seed=5),
        tree_suite=lambda n: default_tree_suite(n, 2, seed=5),
        measure_grid=grid,
        epsilon_grid=[0.25],
        workers=2,
    )
    assert len(result.rows) == 7 * 12 * 2
    assert set(result.max_by_measure) == {f"8,{k}" for k in range(1, 8)}
    assert result.by_epsilon["0.25"] <= result.global_max
    assert result.global_max == max(row.ratio for row in result.rows)


def test_search_constant_is_deterministic():
    kwargs = dict(
        event_suite=lambda n: default_event_suite(n, 6, seed=1),
        tree_suite=lambda n: default_tree_suite(n, 2, seed=1),
        measure_grid=[KOutOfN(6, 3)],
    )
    a = search_constant(**kwargs)
    b = search_constant(workers=3, **kwargs)
    assert [r.ratio for r in a.rows] == [r.ratio for r in b.rows]


# ==================== 蒙特卡洛引擎 ====================


def test_mc_agrees_with_exact():
    event, tree, measure = tribes(10, 2), random_order(10, 4), KOutOfN(10, 5)
    exact = verify_osss(event, tree, measure)
    mc = verify_osss(event, tree, measure, engine="mc", samples=20_000, seed=9, workers=2)
    assert mc.mode == "monte-carlo"
    assert mc.samples == 40_000
    assert abs(mc.lhs - float(exact.lhs)) <= 4 * mc.lhs_stderr + 1e-9
    assert abs(mc.rhs_bracket - float(exact.rhs_bracket)) <= 4 * mc.bracket_stderr + 1e-9
    assert mc.holds_within_error(20.0)


def test_mc_is_reproducible():
    args = (majority(10, 5), fixed_order(range(10)), KOutOfN(10, 5))
    a = verify_osss(*args, engine="mc", samples=2_000, seed=3)
    b = verify_osss(*args, engine="mc", samples=2_000, seed=3)
    assert a.lhs == b.lhs and a.rhs_bracket == b.rhs_bracket


def test_report_from_samples_known_lhs():
    in_a = np.array([True, False, True, False])
    pivotals = np.zeros((4, 3), dtype=bool)
    pivotals[:, 0] = True
    revealed = orders_to_matrix([(0,), (0, 1), (0,), (0, 2)], 3)
    report = report_from_samples(in_a, pivotals, revealed, 3, 1, lhs_exact=Fraction(1, 4))
    assert report.lhs == 0.25 and report.lhs_stderr == 0.0
    assert report.influences == (1.0, 0.0, 0.0)
    assert report.revealments == (1.0, 0.25, 0.25)
    assert math.isclose(report.rhs_bracket, 1.0 + 0.5)


def test_report_from_samples_shapes():
    with pytest.raises(DimensionError):
        report_from_samples(np.ones(3, bool), np.ones((3, 2), bool), np.ones((3, 3), bool), 3, 1)
    with pytest.raises(ParameterError):
        report_from_samples(np.ones(1, bool), np.ones((1, 3), bool), np.ones((1, 3), bool), 3, 1)

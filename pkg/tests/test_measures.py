from fractions import Fraction
from math import comb

import numpy as np
import pytest

from kn_osss.measures import (
    Configuration,
    KOutOfN,
    always_false,
    always_true,
    bits_to_mask,
    check_increasing,
    default_event_suite,
    dictator,
    disagreement_distribution,
    from_minterms,
    from_oracle,
    influence_exact,
    influence_mc,
    influences_exact,
    influences_mc,
    is_pivotal,
    is_pivotal_pair,
    is_zero_pivotal,
    majority,
    masks_to_bits,
    probability_exact,
    threshold,
    tribes,
)
from kn_osss.utils.errors import (
    DimensionError,
    ElementIndexError,
    NotIncreasingError,
    ParameterError,
    ResourceCapError,
)
from kn_osss.utils.stats import chi_square_uniform


def cfg(text: str) -> Configuration:
    return Configuration.from_string(text)


# ==================== 配置 ====================


def test_string_roundtrip_and_bit_order():
    omega = cfg("0101")
    assert omega.bits == 0b1010
    assert omega.ones == 2
    assert omega[1] == 1 and omega[0] == 0
    assert omega.support() == (1, 3)
    assert str(omega) == "0101"


@pytest.mark.parametrize("text, e, expected", [("0101", 0, "1101"), ("0101", 1, "0001")])
def test_flip(text, e, expected):
    assert cfg(text).flip(e).to_string() == expected
    assert cfg(text).flip(e).flip(e) == cfg(text)


@pytest.mark.parametrize("text, expected", [("10", "01"), ("11", "11")])
def test_swap(text, expected):
    assert cfg(text).swap(0, 1).to_string() == expected


def test_swap_preserves_weight():
    rng = np.random.default_rng(3)
    for _ in range(1000):
        n = int(rng.integers(2, 12))
        omega = Configuration(n, int(rng.integers(0, 1 << n)))
        e, f = (int(v) for v in rng.integers(0, n, size=2))
        assert omega.swap(e, f).ones == omega.ones


def test_configuration_errors():
    with pytest.raises(ParameterError):
        Configuration.from_string("012")
    with pytest.raises(DimensionError):
        Configuration(2, 0b100)
    with pytest.raises(ElementIndexError):
        cfg("01").flip(2)


def test_mask_packing():
    masks = np.array([[True, False, True], [False, True, True]])
    assert masks_to_bits(masks) == [0b101, 0b110]
    assert bits_to_mask(0b110, 3).tolist() == [False, True, True]


# ==================== 测度 ====================


def test_mass():
    measure = KOutOfN(4, 2)
    assert measure.mass(cfg("0101")) == Fraction(1, 6)
    assert measure.mass(cfg("0111")) == 0
    assert KOutOfN(1, 1).mass(cfg("1")) == 1


def test_mass_normalized_for_every_slice():
    for n in range(1, 21):
        for k in range(n + 1):
            measure = KOutOfN(n, k)
            mass = measure.mass(Configuration(n, (1 << k) - 1))
            assert isinstance(mass, Fraction)
            assert mass * measure.size == 1


@pytest.mark.parametrize("n", [1, 4, 7, 8])
def test_enumeration_mass_sums_to_one(n):
    for k in range(n + 1):
        measure = KOutOfN(n, k)
        assert sum((measure.mass(omega) for omega in measure.enumerate()), Fraction(0)) == 1


def test_measure_preconditions():
    with pytest.raises(ParameterError):
        KOutOfN(3, 4)
    with pytest.raises(ParameterError):
        KOutOfN(0, 0)
    with pytest.raises(DimensionError):
        KOutOfN(3, 1).mass(cfg("10"))


@pytest.mark.parametrize("n, k, expected", [
    (3, 1, ["001", "010", "100"]),
    (3, 0, ["000"]),
])
def test_enumerate_lexicographic(n, k, expected):
    assert [omega.to_string() for omega in KOutOfN(n, k).enumerate()] == expected


def test_enumerate_distinct_and_capped():
    items = list(KOutOfN(4, 2).enumerate_bits())
    assert len(items) == len(set(items)) == 6
    assert all(bits.bit_count() == 2 for bits in items)
    with pytest.raises(ResourceCapError):
        list(KOutOfN(20, 10).enumerate_bits(cap=1000))


def test_sample_edge_cases():
    assert KOutOfN(2, 2).sample(0).to_string() == "11"
    assert KOutOfN(3, 0).sample(0).to_string() == "000"
    seen = {KOutOfN(2, 1).sample(seed).to_string() for seed in range(40)}
    assert seen == {"10", "01"}


def test_sample_masks_weight():
    masks = KOutOfN(9, 4).sample_masks(1, 500)
    assert masks.shape == (500, 9)
    assert (masks.sum(axis=1) == 4).all()


def test_sample_uniform_chi_square():
    measure = KOutOfN(5, 2)
    index = {bits: i for i, bits in enumerate(measure.enumerate_bits())}
    counts = np.zeros(len(index), dtype=np.int64)
    for bits in measure.iter_sample_bits(2024, 100_000):
        counts[index[bits]] += 1
    assert chi_square_uniform(counts) > 0.001


def test_single_sample_is_in_support():
    measure = KOutOfN(7, 3)
    for seed in range(20):
        assert measure.sample(seed).ones == 3


def test_disagreement_distribution():
    law = disagreement_distribution(2, 1)
    assert law.pmf == {0: Fraction(1, 2), 2: Fraction(1, 2)}
    assert law.mean() == 1
    assert disagreement_distribution(4, 2).mean() == 2
    law = disagreement_distribution(20, 10)
    assert law.total() == 1
    assert 0 < law.prob_below(5) < 1


# ==================== 事件 ====================


def test_generators():
    assert dictator(3, 2)(cfg("001"))
    assert not dictator(3, 2)(cfg("110"))
    assert majority(3)(cfg("110")) and not majority(3)(cfg("100"))
    assert threshold(4, 2, support=[0, 1])(cfg("1100"))
    assert not threshold(4, 2, support=[0, 1])(cfg("1011"))
    assert tribes(4, 2)(cfg("0011")) and not tribes(4, 2)(cfg("0110"))
    assert always_true(3)(cfg("000")) and not always_false(3)(cfg("111"))


def test_from_minterms_drops_dominated_terms():
    event = from_minterms(3, [0b011, 0b001])
    assert event.minterms == (0b001,)


@pytest.mark.parametrize("event, count", [
    (threshold(6, 2), comb(6, 2)),
    (threshold(6, 2, support=[1, 3, 4]), 3),
    (majority(7), comb(7, 4)),
    (threshold(5, 0), 1),
    (threshold(4, 5), 0),
])
def test_threshold_carries_minterms(event, count):
    assert len(event.minterms) == count
    certified = from_minterms(event.n, event.minterms)
    for bits in range(2 ** event.n):
        assert certified.contains_bits(bits) == event.contains_bits(bits)


def test_threshold_minterms_skipped_for_large_n():
    assert threshold(13, 2).minterms is None
    assert majority(13).minterms is None


def test_event_dimension_mismatch():
    with pytest.raises(DimensionError):
        dictator(3, 0)(cfg("10"))
    with pytest.raises(ElementIndexError):
        dictator(3, 3)


def test_check_increasing():
    assert check_increasing(majority(5))
    with pytest.raises(NotIncreasingError):
        from_oracle(3, lambda bits: bits == 0b001)


def test_default_event_suite():
    suite = default_event_suite(8, 30, seed=1)
    assert len(suite) == 30
    assert all(event.n == 8 for event in suite)
    for event in suite:
        assert check_increasing(event)
    names = [event.name for event in default_event_suite(8, 30, seed=1)]
    assert names == [event.name for event in suite]


# ==================== 关键点与影响力 ====================


def test_pivotality():
    event = dictator(2, 0)
    assert is_zero_pivotal(event, cfg("01"), 0)
    assert not is_pivotal(event, cfg("01"), 1)
    assert not is_pivotal_pair(majority(3), cfg("110"), 0, 2)
    with pytest.raises(ParameterError):
        is_pivotal_pair(majority(3), cfg("110"), 1, 1)


def test_influence_dictator():
    measure = KOutOfN(10, 5)
    event = dictator(10, 0)
    assert influence_exact(event, measure, 0) == Fraction(1, 2)
    assert influence_exact(event, measure, 5) == 0


def _brute_influence(event, measure, e):
    count = 0
    for omega in measure.enumerate():
        if is_zero_pivotal(event, omega, e):
            count += 1
    return Fraction(count, measure.size)


@pytest.mark.parametrize("event", [threshold(4, 2), majority(4), tribes(4, 2), threshold(4, 2, support=[0, 1, 2])])
def test_influences_exact_matches_definition(event):
    measure = KOutOfN(4, 2)
    vector = influences_exact(event, measure)
    assert list(vector.values) == [_brute_influence(event, measure, e) for e in range(4)]
    assert vector.total == sum(vector.values)


def test_influence_mc_dictator():
    measure = KOutOfN(10, 5)
    est = influence_mc(dictator(10, 0), measure, 0, 20_000, rng=9)
    assert est.within(0.5, 4.0)
    assert influence_mc(dictator(10, 0), measure, 5, 2000, rng=9).mean == 0.0


def test_influences_mc_matches_exact():
    measure = KOutOfN(8, 4)
    event = tribes(8, 2)
    exact = influences_exact(event, measure)
    est = influences_mc(event, measure, 20_000, rng=4, workers=2)
    for e in range(8):
        assert abs(est.values[e] - float(exact.values[e])) <= 4 * est.stderr[e] + 1e-12


def test_probability_exact():
    assert probability_exact(dictator(4, 0), KOutOfN(4, 2)) == Fraction(1, 2)
    assert probability_exact(majority(4), KOutOfN(4, 2)) == 0
    assert probability_exact(always_true(4), KOutOfN(4, 2)) == 1
    n, k = 6, 3
    assert probability_exact(threshold(n, 2, support=[0, 1]), KOutOfN(n, k)) == Fraction(comb(4, 1), comb(6, 3))

"""关键点与影响力

I(e) = P_{k,n}(e 是 0-关键点), 精确版本按 Ω_{k,n} 枚举求和, 蒙特卡洛版本按批抽样
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from ..utils.errors import DimensionError, ElementIndexError, ParameterError
from ..utils.parallel import SeedLike, run_chunks
from ..utils.stats import Estimate, estimate_from_sums
from .configuration import Configuration
from .events import IncreasingEvent
from .measure import KOutOfN


def _check_event(event: IncreasingEvent, n: int):
    if event.n != n:
        raise DimensionError(f"事件 {event.name} 定义在 n={event.n} 上, 与 n={n} 不一致")


# ==================== 关键点 ====================


def is_pivotal(event: IncreasingEvent, omega: Configuration, e: int) -> bool:
    """ω 与 ω^(e) 恰有一个属于 A"""
    return event(omega) != event(omega.flip(e))


def is_zero_pivotal(event: IncreasingEvent, omega: Configuration, e: int) -> bool:
    return omega[e] == 0 and is_pivotal(event, omega, e)


def is_pivotal_pair(event: IncreasingEvent, omega: Configuration, e: int, f: int) -> bool:
    """ω 与 ω^(e,f) 恰有一个属于 A"""
    if e == f:
        raise ParameterError(f"关键对要求 e != f, 收到 e = f = {e}")
    return event(omega) != event(omega.swap(e, f))


# ==================== 影响力向量 ====================


@dataclass(frozen=True)
class InfluenceVector:
    """逐元素影响力; 精确模式为有理数, 蒙特卡洛模式附带标准误"""
    values: tuple[Union[Fraction, float], ...]
    mode: str
    samples: Optional[int] = None
    stderr: Optional[tuple[float, ...]] = None

    @property
    def total(self):
        return sum(self.values, Fraction(0) if self.mode == "exact" else 0.0)

    def __getitem__(self, e: int):
        return self.values[e]

    def __len__(self) -> int:
        return len(self.values)


def influence_exact(event: IncreasingEvent, measure: KOutOfN, e: int, cap: Optional[int] = None) -> Fraction:
    _check_event(event, measure.n)
    if not 0 <= e < measure.n:
        raise ElementIndexError(f"元素 {e} 不在 0..{measure.n - 1} 内")
    bit = 1 << e
    count = 0
    for bits in measure.enumerate_bits(cap):
        if not bits & bit and event.contains_bits(bits) != event.contains_bits(bits | bit):
            count += 1
    return Fraction(count, measure.size)


def influences_exact(event: IncreasingEvent, measure: KOutOfN, cap: Optional[int] = None) -> InfluenceVector:
    """一次枚举得到全部坐标的精确影响力"""
    _check_event(event, measure.n)
    n = measure.n
    counts = [0] * n
    for bits in measure.enumerate_bits(cap):
        for e in event.zero_pivotals(bits):
            counts[e] += 1
    return InfluenceVector(tuple(Fraction(c, measure.size) for c in counts), mode="exact")


def _pivotal_counts(event: IncreasingEvent, measure: KOutOfN):
    def work(size: int, rng: np.random.Generator) -> list[int]:
        counts = [0] * measure.n
        for bits in measure.iter_sample_bits(rng, size):
            for e in event.zero_pivotals(bits):
                counts[e] += 1
        return counts

    return work


def influences_mc(event: IncreasingEvent, measure: KOutOfN, samples: int, rng: SeedLike = None,
                  workers: int = 1) -> InfluenceVector:
    """蒙特卡洛影响力向量, 标准误 = 样本标准差 / sqrt(样本数)"""
    _check_event(event, measure.n)
    chunks = run_chunks(_pivotal_counts(event, measure), samples, rng, workers)
    totals = np.sum(np.array(chunks, dtype=np.int64), axis=0)
    estimates = [estimate_from_sums(int(c), int(c), samples) for c in totals]
    return InfluenceVector(
        values=tuple(est.mean for est in estimates),
        mode="monte-carlo",
        samples=samples,
        stderr=tuple(est.stderr for est in estimates),
    )


def influence_mc(event: IncreasingEvent, measure: KOutOfN, e: int, samples: int, rng: SeedLike = None,
                 workers: int = 1) -> Estimate:
    """单个坐标的无偏影响力估计"""
    _check_event(event, measure.n)
    if not 0 <= e < measure.n:
        raise ElementIndexError(f"元素 {e} 不在 0..{measure.n - 1} 内")
    bit = 1 << e

    def work(size: int, rng: np.random.Generator) -> int:
        count = 0
        for bits in measure.iter_sample_bits(rng, size):
            if not bits & bit and event.contains_bits(bits) != event.contains_bits(bits | bit):
                count += 1
        return count

    total = sum(run_chunks(work, samples, rng, workers))
    return estimate_from_sums(total, total, samples)


def probability_exact(event: IncreasingEvent, measure: KOutOfN, cap: Optional[int] = None) -> Fraction:
    """P_{k,n}(A)"""
    _check_event(event, measure.n)
    count = sum(1 for bits in measure.enumerate_bits(cap) if event.contains_bits(bits))
    return Fraction(count, measure.size)

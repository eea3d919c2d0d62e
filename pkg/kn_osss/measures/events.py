"""递增事件

成员判定是作用在打包整数上的黑盒 oracle, 单调性属于构造约定, 由 check_increasing 抽查;
内置生成器产出的事件附带极小项 (minimal 1-sets) 证书.

功能:
- dictator / threshold / majority / tribes / random_dnf / always_true / always_false
- from_minterms / from_oracle
- check_increasing: n 不大于阈值时穷举覆盖对, 否则随机抽取可比较对
"""

from dataclasses import dataclass, field
from itertools import combinations
from math import ceil
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from loguru import logger

from ..utils.errors import DimensionError, ElementIndexError, NotIncreasingError, ParameterError
from ..utils.parallel import SeedLike, as_generator
from .config import plugin_config
from .configuration import Configuration


Oracle = Callable[[int], bool]
PivotalOracle = Callable[[int], Sequence[int]]


@dataclass(frozen=True, eq=False)
class IncreasingEvent:
    """
    递增事件 A ⊆ {0,1}^n

    Attributes:
        name: 标签
        n: 基集大小
        oracle: 打包整数 -> 是否属于 A
        minterms: 可选的极小项证书
        pivotal_oracle: 可选的快速 0-关键点计算, 返回 0-关键元素列表
    """
    name: str
    n: int
    oracle: Oracle = field(repr=False)
    minterms: Optional[tuple[int, ...]] = field(default=None, repr=False)
    pivotal_oracle: Optional[PivotalOracle] = field(default=None, repr=False)

    def contains_bits(self, bits: int) -> bool:
        return bool(self.oracle(bits))

    def __call__(self, omega: Configuration) -> bool:
        if omega.n != self.n:
            raise DimensionError(f"事件 {self.name} 定义在 n={self.n} 上, 配置长度为 {omega.n}")
        return bool(self.oracle(omega.bits))

    contains = __call__

    def zero_pivotals(self, bits: int) -> Sequence[int]:
        """bits 中所有 0-关键元素: ω_e = 0 且翻转改变成员关系"""
        if self.pivotal_oracle is not None:
            return self.pivotal_oracle(bits)
        inside = self.contains_bits(bits)
        return [
            e for e in range(self.n)
            if not (bits >> e) & 1 and self.contains_bits(bits | (1 << e)) != inside
        ]


# ==================== 生成器 ====================


def _minimal(minterms: Iterable[int]) -> tuple[int, ...]:
    """去掉被其他极小项包含的项"""
    unique = sorted(set(minterms), key=lambda m: (m.bit_count(), m))
    kept: list[int] = []
    for m in unique:
        if not any(m & k == k for k in kept):
            kept.append(m)
    return tuple(kept)


def _minterm_oracle(minterms: tuple[int, ...]) -> Oracle:
    def oracle(bits: int) -> bool:
        for m in minterms:
            if bits & m == m:
                return True
        return False
    return oracle


def from_minterms(n: int, minterms: Iterable[int], name: str = "dnf") -> IncreasingEvent:
    """由极小项 (打包整数) 构造单调 DNF 事件"""
    terms = _minimal(minterms)
    for m in terms:
        if m < 0 or m >> n:
            raise DimensionError(f"极小项 {m:#b} 超出长度 n={n}")
    return IncreasingEvent(name, n, _minterm_oracle(terms), minterms=terms)


def from_oracle(n: int, oracle: Oracle, name: str = "oracle", check: bool = True,
                rng: SeedLike = 0) -> IncreasingEvent:
    """包装任意 oracle; check 为真时立即检查单调性"""
    event = IncreasingEvent(name, n, oracle)
    if check:
        check_increasing(event, rng=rng)
    return event


def dictator(n: int, e: int) -> IncreasingEvent:
    """A = {ω_e = 1}"""
    if not 0 <= e < n:
        raise ElementIndexError(f"元素 {e} 不在 0..{n - 1} 内")
    return from_minterms(n, [1 << e], name=f"dictator[{e}]")


def threshold(n: int, t: int, support: Optional[Sequence[int]] = None) -> IncreasingEvent:
    """A = {support 上至少 t 个 1}"""
    support = tuple(range(n)) if support is None else tuple(support)
    mask = 0
    for e in support:
        if not 0 <= e < n:
            raise ElementIndexError(f"元素 {e} 不在 0..{n - 1} 内")
        mask |= 1 << e
    if t < 0:
        raise ParameterError(f"阈值必须非负, 收到 t={t}")

    def oracle(bits: int) -> bool:
        return (bits & mask).bit_count() >= t

    minterms = None
    if n <= plugin_config.measures_threshold_minterm_n:
        # support 的全部 t 元子集
        minterms = tuple(sum(1 << e for e in chosen) for chosen in combinations(sorted(set(support)), t))
    label = f"threshold[{t}/{len(support)}]"
    return IncreasingEvent(label, n, oracle, minterms=minterms)


def majority(n: int, t: Optional[int] = None) -> IncreasingEvent:
    """至少 t 个 1, 默认 t = n // 2 + 1"""
    t = n // 2 + 1 if t is None else t
    event = threshold(n, t)
    return IncreasingEvent(f"majority[{t}/{n}]", n, event.oracle, minterms=event.minterms)


def tribes(n: int, width: int) -> IncreasingEvent:
    """按宽度 width 切块, 某一块全为 1"""
    if width < 1:
        raise ParameterError(f"块宽必须为正, 收到 {width}")
    terms = []
    for start in range(0, n, width):
        block = 0
        for e in range(start, min(start + width, n)):
            block |= 1 << e
        terms.append(block)
    return from_minterms(n, terms, name=f"tribes[{width}]")


def always_true(n: int) -> IncreasingEvent:
    return IncreasingEvent("always_true", n, lambda bits: True, minterms=(0,))


def always_false(n: int) -> IncreasingEvent:
    return IncreasingEvent("always_false", n, lambda bits: False, minterms=())


def random_dnf(n: int, rng: SeedLike = None, name: Optional[str] = None) -> IncreasingEvent:
    """随机单调 DNF: 项数 m ∈ [1, 2n], 每项宽度 ∈ [1, ⌈n/2⌉]"""
    rng = as_generator(rng)
    m = int(rng.integers(1, 2 * n + 1))
    max_width = max(1, ceil(n / 2))
    terms = []
    for _ in range(m):
        width = int(rng.integers(1, max_width + 1))
        chosen = rng.choice(n, size=width, replace=False)
        term = 0
        for e in chosen:
            term |= 1 << int(e)
        terms.append(term)
    return from_minterms(n, terms, name=name or f"dnf[m={m}]")


# ==================== 单调性检查 ====================


def check_increasing(event: IncreasingEvent, rng: SeedLike = 0, pairs: Optional[int] = None) -> bool:
    """
    检查 ω <= σ 时 ω ∈ A 蕴含 σ ∈ A

    n 不超过 measures_exhaustive_monotone_n 时穷举所有覆盖对 (σ = ω + 一个点),
    否则随机抽取 pairs 个可比较对.

    Raises:
        NotIncreasingError: 找到反例, 消息中给出 ω 与 σ
    """
    n = event.n
    if n <= plugin_config.measures_exhaustive_monotone_n:
        for bits in range(1 << n):
            if not event.contains_bits(bits):
                continue
            for e in range(n):
                if not (bits >> e) & 1 and not event.contains_bits(bits | (1 << e)):
                    lower = Configuration(n, bits)
                    upper = Configuration(n, bits | (1 << e))
                    logger.error(f"事件 {event.name} 不单调: {lower} ∈ A 但 {upper} ∉ A")
                    raise NotIncreasingError(f"事件 {event.name} 不单调: {lower} ∈ A 但 {upper} ∉ A")
        return True

    rng = as_generator(rng)
    pairs = plugin_config.measures_monotone_pairs if pairs is None else pairs
    for _ in range(pairs):
        low = rng.random(n) < rng.random()
        extra = rng.random(n) < rng.random()
        high = low | extra
        lower = Configuration.from_array(low)
        upper = Configuration.from_array(high)
        if event.contains_bits(lower.bits) and not event.contains_bits(upper.bits):
            logger.error(f"事件 {event.name} 不单调: {lower} ∈ A 但 {upper} ∉ A")
            raise NotIncreasingError(f"事件 {event.name} 不单调: {lower} ∈ A 但 {upper} ∉ A")
    return True


def default_event_suite(n: int, size: int, seed: SeedLike = 0) -> list[IncreasingEvent]:
    """
    生成事件族: 先放 dictator, majority, tribes 等结构化事件, 其余用随机 DNF 补足

    Returns:
        恰好 size 个事件 (size 小于结构化事件数时截断)
    """
    rng = as_generator(seed)
    events = [
        dictator(n, 0),
        dictator(n, n - 1),
        majority(n),
        threshold(n, max(1, n // 2)),
        tribes(n, max(1, n // 4)),
        threshold(n, 2, support=range(min(3, n))),
    ]
    events = events[:size]
    while len(events) < size:
        events.append(random_dnf(n, rng, name=f"dnf#{len(events)}"))
    return events

"""停时 τ 与执行记录

τ(ω) = min{t >= 1 : 与 ω 在 e_[t] 上一致的所有 ω' 对 A 的成员关系相同}

- standard: ω' 取遍 {0,1}^n. 事件递增, 只需比较 "未揭示全 0" 与 "未揭示全 1" 两个补全
- fixed-weight: ω' 只取 |ω'| = k 的补全, 逐个枚举放置方式, 同时见到两种结果即停
"""

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from math import comb
from typing import Optional, Union

from ..measures.configuration import Configuration
from ..measures.events import IncreasingEvent
from ..utils.errors import DimensionError, ParameterError, ResourceCapError
from .config import plugin_config
from .tree import DecisionTree


class TauVariant(str, Enum):
    STANDARD = "standard"
    FIXED_WEIGHT = "fixed-weight"


TauLike = Union[TauVariant, str]


def as_variant(variant: Optional[TauLike]) -> TauVariant:
    if variant is None:
        variant = plugin_config.trees_tau_variant
    try:
        return TauVariant(variant)
    except ValueError:
        raise ParameterError(f"未知的 tau 变体: {variant!r}, 可选 standard / fixed-weight") from None


def _positions(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class Determiner:
    """
    给定已揭示集合 revealed 和其中取 1 的集合 ones, 判断 A 的成员关系是否已确定

    结果按 (revealed, ones) 缓存; 同一个实例不要跨线程共享
    """

    def __init__(self, event: IncreasingEvent, variant: TauLike = TauVariant.STANDARD,
                 k: Optional[int] = None):
        self.event = event
        self.variant = as_variant(variant)
        self.full = (1 << event.n) - 1
        self.k = k
        if self.variant is TauVariant.FIXED_WEIGHT and k is None:
            raise ParameterError("fixed-weight 变体需要给出 k")
        self._memo: dict[tuple[int, int], Optional[bool]] = {}

    def outcome(self, revealed: int, ones: int) -> Optional[bool]:
        """已确定时返回成员关系, 否则返回 None"""
        key = (revealed, ones)
        if key in self._memo:
            return self._memo[key]
        if self.variant is TauVariant.STANDARD:
            result = self._standard(revealed, ones)
        else:
            result = self._fixed_weight(revealed, ones)
        if len(self._memo) >= plugin_config.trees_memo_limit:
            self._memo.clear()
        self._memo[key] = result
        return result

    def _standard(self, revealed: int, ones: int) -> Optional[bool]:
        low = self.event.contains_bits(ones)
        high = self.event.contains_bits(ones | (self.full & ~revealed))
        return low if low == high else None

    def _fixed_weight(self, revealed: int, ones: int) -> Optional[bool]:
        free = self.full & ~revealed
        need = self.k - ones.bit_count()
        if need < 0 or need > free.bit_count():
            return None
        minterms = self.event.minterms
        if minterms is not None:
            # 没有任何极小项能在剩余 need 个 1 内补齐时, 必然不在 A 中
            reachable = any(
                m & ~(ones | free) == 0 and (m & free & ~ones).bit_count() <= need
                for m in minterms
            )
            if not reachable:
                return False
        seen_in = seen_out = False
        for chosen in combinations(_positions(free), need):
            bits = ones
            for e in chosen:
                bits |= 1 << e
            if self.event.contains_bits(bits):
                seen_in = True
            else:
                seen_out = True
            if seen_in and seen_out:
                return None
        return seen_in


@dataclass(frozen=True)
class Transcript:
    """执行记录: 查询顺序, 揭示的取值, 停时 τ, 以及判定 1_A(ω)"""
    order: tuple[int, ...]
    values: tuple[int, ...]
    tau: int
    decision: bool
    variant: TauVariant = TauVariant.STANDARD


def run_tree(tree: DecisionTree, event: IncreasingEvent, omega: Configuration,
             tau_variant: TauLike = TauVariant.STANDARD,
             determiner: Optional[Determiner] = None) -> Transcript:
    """
    在 ω 上运行决策树, 直到成员关系确定

    Args:
        determiner: 可复用的判定器 (蒙特卡洛循环中共享缓存)
    """
    variant = as_variant(tau_variant)
    if omega.n != tree.n or event.n != tree.n:
        raise DimensionError(f"树 n={tree.n}, 事件 n={event.n}, 配置长度 {omega.n} 不一致")
    if determiner is None:
        determiner = Determiner(event, variant, omega.ones)
    elif variant is TauVariant.FIXED_WEIGHT and determiner.k != omega.ones:
        raise ParameterError(f"fixed-weight 变体要求 |ω| = k = {determiner.k}, 收到 {omega.ones}")
    return run_bits(tree, determiner, omega.bits, variant)


def run_bits(tree: DecisionTree, determiner: Determiner, bits: int, variant: TauVariant) -> Transcript:
    order: list[int] = []
    values: list[int] = []
    revealed = ones = 0
    for t in range(1, tree.n + 1):
        e = tree.next_element(tuple(order), tuple(values))
        v = (bits >> e) & 1
        order.append(e)
        values.append(v)
        revealed |= 1 << e
        ones |= v << e
        result = determiner.outcome(revealed, ones)
        if result is not None:
            return Transcript(tuple(order), tuple(values), t, result, variant)
    # 全部揭示后必然确定, 走到这里说明 oracle 或判定器有问题
    raise ParameterError(f"事件 {determiner.event.name} 在完全揭示后仍未确定")


def _completions(n: int, revealed: int, ones: int, k: Optional[int]):
    free = _positions(((1 << n) - 1) & ~revealed)
    if k is None:
        for mask in range(1 << len(free)):
            bits = ones
            for i, e in enumerate(free):
                if (mask >> i) & 1:
                    bits |= 1 << e
            yield bits
    else:
        need = k - ones.bit_count()
        if 0 <= need <= len(free):
            for chosen in combinations(free, need):
                bits = ones
                for e in chosen:
                    bits |= 1 << e
                yield bits


def _determined(event: IncreasingEvent, n: int, revealed: int, ones: int, k: Optional[int]) -> Optional[bool]:
    seen = set()
    for bits in _completions(n, revealed, ones, k):
        seen.add(event.contains_bits(bits))
        if len(seen) == 2:
            return None
    return seen.pop() if seen else None


def tau_certificate_check(tree: DecisionTree, event: IncreasingEvent, omega: Configuration,
                          transcript: Transcript) -> bool:
    """
    校验执行记录

    - 用记录中的取值重放后继规则能复现查询顺序, 且取值与 ω 一致
    - 枚举补全: 第 τ 步已确定且结果等于 decision, 第 τ-1 步 (τ >= 2 时) 尚未确定
    """
    n = tree.n
    if n > plugin_config.trees_certificate_max_n:
        raise ResourceCapError(f"n={n} 超过证书检查上限 {plugin_config.trees_certificate_max_n}")
    if len(transcript.order) != transcript.tau or len(transcript.values) != transcript.tau:
        return False
    if not 1 <= transcript.tau <= n:
        return False
    for t, e in enumerate(transcript.order):
        if tree.next_element(transcript.order[:t], transcript.values[:t]) != e:
            return False
        if omega[e] != transcript.values[t]:
            return False

    k = omega.ones if transcript.variant is TauVariant.FIXED_WEIGHT else None

    def masks(t: int) -> tuple[int, int]:
        revealed = ones = 0
        for e, v in zip(transcript.order[:t], transcript.values[:t]):
            revealed |= 1 << e
            ones |= v << e
        return revealed, ones

    at_tau = _determined(event, n, *masks(transcript.tau), k)
    if at_tau is None or at_tau != transcript.decision:
        return False
    if transcript.tau >= 2 and _determined(event, n, *masks(transcript.tau - 1), k) is not None:
        return False
    return True


def consistent_count(n: int, k: int, revealed_count: int, ones_count: int) -> int:
    """与长度 t 的历史一致的 Ω_{k,n} 元素个数"""
    rest = n - revealed_count
    need = k - ones_count
    if need < 0 or need > rest:
        return 0
    return comb(rest, need)

"""不一致点与匹配

x, y 权重相同时, (1,0) 型与 (0,1) 型不一致点个数相等; 匹配 σ 是把两类点互相配对的对合,
在一致点 (单点) 上取恒等.
"""

from dataclasses import dataclass
from itertools import permutations
from math import factorial
from typing import Iterator

from ..measures.configuration import Configuration
from ..utils.errors import DimensionError, MatchingError
from ..utils.parallel import SeedLike, as_generator


def _bits_positions(mask: int) -> list[int]:
    out = []
    e = 0
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return out


def disagreement_points(x: Configuration, y: Configuration) -> tuple[frozenset[int], frozenset[int]]:
    """
    Returns:
        ((1,0) 型点集, (0,1) 型点集), 两者大小相同, d(x, y) 为两者大小之和

    Raises:
        MatchingError: |x| != |y|
    """
    if x.n != y.n:
        raise DimensionError(f"长度不一致: {x.n} 与 {y.n}")
    if x.ones != y.ones:
        raise MatchingError(f"|x| = {x.ones} 与 |y| = {y.ones} 不同, 匹配无定义")
    return (
        frozenset(_bits_positions(x.bits & ~y.bits)),
        frozenset(_bits_positions(y.bits & ~x.bits)),
    )


def distance(x: Configuration, y: Configuration) -> int:
    return (x.bits ^ y.bits).bit_count()


@dataclass(frozen=True)
class Matching:
    """σ 以元组形式保存, pairing[e] = σ(e)"""
    n: int
    pairing: tuple[int, ...]

    def __post_init__(self):
        if len(self.pairing) != self.n:
            raise MatchingError(f"匹配长度 {len(self.pairing)} 与 n={self.n} 不一致")
        for e, f in enumerate(self.pairing):
            if not 0 <= f < self.n or self.pairing[f] != e:
                raise MatchingError(f"σ 不是对合: σ({e}) = {f}")

    def __call__(self, e: int) -> int:
        return self.pairing[e]

    def pairs(self) -> frozenset[frozenset[int]]:
        """全部匹配对 {e, σ(e)}, 不含单点"""
        return frozenset(frozenset((e, f)) for e, f in enumerate(self.pairing) if e < f)

    def singletons(self) -> tuple[int, ...]:
        return tuple(e for e, f in enumerate(self.pairing) if e == f)

    def validate(self, x: Configuration, y: Configuration):
        """检查 σ 对 (x, y) 合法: 类型交替, 只在一致点上不动"""
        ones_zero, zero_ones = disagreement_points(x, y)
        for e, f in enumerate(self.pairing):
            if e in ones_zero:
                if f not in zero_ones:
                    raise MatchingError(f"(1,0) 型点 {e} 被配到 {f}, 它不是 (0,1) 型")
            elif e in zero_ones:
                if f not in ones_zero:
                    raise MatchingError(f"(0,1) 型点 {e} 被配到 {f}, 它不是 (1,0) 型")
            elif f != e:
                raise MatchingError(f"一致点 {e} 必须是单点, 却被配到 {f}")


def matching_from_lists(n: int, ones_zero: list[int], zero_ones: list[int]) -> Matching:
    pairing = list(range(n))
    for g, h in zip(ones_zero, zero_ones):
        pairing[g] = h
        pairing[h] = g
    return Matching(n, tuple(pairing))


def enumerate_matchings(x: Configuration, y: Configuration) -> Iterator[Matching]:
    """逐个产出 (d/2)! 个匹配: 有序 (1,0) 列表配上 (0,1) 列表的全部排列"""
    ones_zero, zero_ones = disagreement_points(x, y)
    left = sorted(ones_zero)
    for perm in permutations(sorted(zero_ones)):
        yield matching_from_lists(x.n, left, list(perm))


def matching_count(x: Configuration, y: Configuration) -> int:
    return factorial(distance(x, y) // 2)


def uniform_matching(x: Configuration, y: Configuration, rng: SeedLike = None) -> Matching:
    """对 (0,1) 列表做均匀随机排列"""
    ones_zero, zero_ones = disagreement_points(x, y)
    right = sorted(zero_ones)
    if right:
        order = as_generator(rng).permutation(len(right))
        right = [right[i] for i in order]
    return matching_from_lists(x.n, sorted(ones_zero), right)

"""决策树 T = (e_1, φ)

后继规则是全函数: (已揭示元素的有序元组, 对应取值) -> 下一个未揭示元素.
只看顺序不看取值的树是特例.
"""

import hashlib
import operator
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from ..utils.errors import ParameterError, TreeDefinitionError
from ..utils.parallel import SeedLike, as_generator


Successor = Callable[[tuple[int, ...], tuple[int, ...]], int]


@dataclass(frozen=True, eq=False)
class DecisionTree:
    n: int
    first: int
    successor: Successor = field(repr=False)
    name: str = "tree"

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"基集大小必须为正, 收到 n={self.n}")
        if not 0 <= self.first < self.n:
            raise TreeDefinitionError(f"树 {self.name} 的首个查询 {self.first} 不在 0..{self.n - 1} 内")

    def next_element(self, order: tuple[int, ...], values: tuple[int, ...]) -> int:
        """
        按历史给出下一个查询元素

        Raises:
            TreeDefinitionError: 后继越界, 重复查询, 或历史已满
        """
        if len(order) >= self.n:
            raise TreeDefinitionError(f"树 {self.name} 的元素已全部揭示")
        if not order:
            return self.first
        raw = self.successor(order, values)
        try:
            e = operator.index(raw)
        except TypeError:
            raise TreeDefinitionError(f"树 {self.name} 的后继 {raw!r} 不是整数") from None
        if not 0 <= e < self.n:
            raise TreeDefinitionError(f"树 {self.name} 的后继 {e!r} 不在 0..{self.n - 1} 内")
        if e in order:
            raise TreeDefinitionError(f"树 {self.name} 的后继 {e} 已经揭示过")
        return e

    def query_order(self, bits: int) -> tuple[int, ...]:
        """在配置 bits 上把 n 个元素全部查完的顺序"""
        order: list[int] = []
        values: list[int] = []
        for _ in range(self.n):
            e = self.next_element(tuple(order), tuple(values))
            order.append(e)
            values.append((bits >> e) & 1)
        return tuple(order)


# ==================== 构造 ====================


def fixed_order(order: Sequence[int], name: Optional[str] = None) -> DecisionTree:
    """按固定排列查询"""
    perm = tuple(int(e) for e in order)
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise TreeDefinitionError(f"{perm} 不是 0..{n - 1} 的排列")

    def successor(done: tuple[int, ...], values: tuple[int, ...]) -> int:
        return perm[len(done)]

    if name is None:
        name = "fixed_order" if perm == tuple(range(n)) else f"fixed_order{list(perm)}"
    return DecisionTree(n, perm[0], successor, name)


def first_query(n: int, e: int) -> DecisionTree:
    """先查 e, 其余按下标递增"""
    if not 0 <= e < n:
        raise TreeDefinitionError(f"元素 {e} 不在 0..{n - 1} 内")
    return fixed_order([e] + [f for f in range(n) if f != e], name=f"first_query[{e}]")


def random_order(n: int, rng: SeedLike = None, name: Optional[str] = None) -> DecisionTree:
    """随机排列, 构造后固定"""
    perm = as_generator(rng).permutation(n)
    return fixed_order(perm, name=name or "random_order")


def _hash_pick(seed: int, order: tuple[int, ...], values: tuple[int, ...], n: int) -> int:
    digest = hashlib.blake2b(repr((seed, order, values)).encode("utf-8"), digest_size=8).digest()
    remaining = [e for e in range(n) if e not in order]
    return remaining[int.from_bytes(digest, "little") % len(remaining)]


def balanced_split(n: int, seed: int = 0) -> DecisionTree:
    """自适应压力测试树: 由 (seed, 历史) 的哈希挑选一个未揭示元素"""
    first = _hash_pick(seed, (), (), n)

    def successor(order: tuple[int, ...], values: tuple[int, ...]) -> int:
        return _hash_pick(seed, order, values, n)

    return DecisionTree(n, first, successor, name=f"balanced_split[{seed}]")


def default_tree_suite(n: int, count: int = 3, seed: SeedLike = 0) -> list[DecisionTree]:
    """顺序树, 随机排列树和 balanced_split, 不足时用随机排列补齐"""
    rng = as_generator(seed)
    trees = [
        fixed_order(range(n)),
        random_order(n, rng, name="random_order#1"),
        balanced_split(n, int(rng.integers(2**31))),
    ][:count]
    while len(trees) < count:
        trees.append(random_order(n, rng, name=f"random_order#{len(trees)}"))
    return trees

"""揭示概率 δ_e 与平均揭示 δ̄

精确引擎沿决策树对历史做深度优先遍历: 在第一次确定的节点停下, 该叶子的权重是与历史一致的
Ω_{k,n} 元素个数, 与逐个 ω 求和完全等价, 但判定次数只与树的节点数有关.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from ..measures.events import IncreasingEvent
from ..measures.measure import KOutOfN
from ..utils.errors import DimensionError
from ..utils.parallel import SeedLike, run_chunks
from ..utils.stats import estimate_from_sums
from .tau import Determiner, TauLike, run_bits, as_variant, consistent_count
from .tree import DecisionTree


@dataclass(frozen=True)
class RevealmentVector:
    """逐元素揭示概率; Σ_e δ_e = E[τ]"""
    values: tuple[Union[Fraction, float], ...]
    average: Union[Fraction, float]
    expected_tau: Union[Fraction, float]
    mode: str
    samples: Optional[int] = None
    stderr: Optional[tuple[float, ...]] = None

    def __getitem__(self, e: int):
        return self.values[e]

    def __len__(self) -> int:
        return len(self.values)


def _check(tree: DecisionTree, event: IncreasingEvent, measure: KOutOfN):
    if not tree.n == event.n == measure.n:
        raise DimensionError(f"树 n={tree.n}, 事件 n={event.n}, 测度 n={measure.n} 不一致")


def revealments_exact(tree: DecisionTree, event: IncreasingEvent, measure: KOutOfN,
                      tau_variant: TauLike = "standard", cap: Optional[int] = None) -> RevealmentVector:
    """δ_e = Σ_ω P(ω) 1{e 在前 τ(ω) 步内被查询}, 精确有理数"""
    _check(tree, event, measure)
    measure.check_cap(cap)
    variant = as_variant(tau_variant)
    n, k = measure.n, measure.k
    determiner = Determiner(event, variant, k)
    counts = [0] * n
    tau_total = 0

    # 显式栈: (顺序, 取值, revealed, ones)
    stack = [((), (), 0, 0)]
    while stack:
        order, values, revealed, ones = stack.pop()
        e = tree.next_element(order, values)
        t = len(order) + 1
        for v in (0, 1):
            new_ones = ones | (v << e)
            weight = consistent_count(n, k, t, new_ones.bit_count())
            if weight == 0:
                continue
            new_revealed = revealed | (1 << e)
            if determiner.outcome(new_revealed, new_ones) is None:
                stack.append((order + (e,), values + (v,), new_revealed, new_ones))
                continue
            for f in order:
                counts[f] += weight
            counts[e] += weight
            tau_total += weight * t

    total = measure.size
    values = tuple(Fraction(c, total) for c in counts)
    return RevealmentVector(
        values=values,
        average=Fraction(sum(counts), total * n),
        expected_tau=Fraction(tau_total, total),
        mode="exact",
    )


def expected_tau_exact(tree: DecisionTree, event: IncreasingEvent, measure: KOutOfN,
                       tau_variant: TauLike = "standard") -> Fraction:
    return revealments_exact(tree, event, measure, tau_variant).expected_tau


def collect_revealed(tree: DecisionTree, event: IncreasingEvent, measure: KOutOfN, samples: int,
                     rng: SeedLike = None, tau_variant: TauLike = "standard",
                     workers: int = 1) -> list[tuple[int, ...]]:
    """逐样本记录前 τ 步查询过的元素"""
    _check(tree, event, measure)
    variant = as_variant(tau_variant)

    def work(size: int, stream: np.random.Generator) -> list[tuple[int, ...]]:
        determiner = Determiner(event, variant, measure.k)
        return [
            run_bits(tree, determiner, bits, variant).order
            for bits in measure.iter_sample_bits(stream, size)
        ]

    out: list[tuple[int, ...]] = []
    for chunk in run_chunks(work, samples, rng, workers):
        out.extend(chunk)
    return out


def revealments_from_orders(orders: list[tuple[int, ...]], n: int) -> RevealmentVector:
    samples = len(orders)
    counts = np.zeros(n, dtype=np.int64)
    tau_total = 0
    for order in orders:
        counts[list(order)] += 1
        tau_total += len(order)
    estimates = [estimate_from_sums(int(c), int(c), samples) for c in counts]
    values = tuple(est.mean for est in estimates)
    return RevealmentVector(
        values=values,
        average=sum(values) / n,
        expected_tau=tau_total / samples,
        mode="monte-carlo",
        samples=samples,
        stderr=tuple(est.stderr for est in estimates),
    )


def revealments_mc(tree: DecisionTree, event: IncreasingEvent, measure: KOutOfN, samples: int,
                   rng: SeedLike = None, tau_variant: TauLike = "standard",
                   workers: int = 1) -> RevealmentVector:
    """蒙特卡洛揭示概率, 每个元素的指示量无偏"""
    orders = collect_revealed(tree, event, measure, samples, rng, tau_variant, workers)
    return revealments_from_orders(orders, measure.n)

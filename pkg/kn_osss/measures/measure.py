"""k-out-of-n 测度 P_{k,n}

Ω_{k,n} 上的均匀分布: 精确质量, 抽样, 按字典序枚举, 以及两个独立样本的不一致点数分布
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterator, Optional

import numpy as np

from ..utils.errors import DimensionError, ParameterError, ResourceCapError
from ..utils.parallel import SeedLike, as_generator
from .config import plugin_config
from .configuration import Configuration, masks_to_bits


@dataclass(frozen=True)
class KOutOfN:
    """恰有 k 个 1 的长度 n 串上的均匀分布"""
    n: int
    k: int

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"基集大小必须为正, 收到 n={self.n}")
        if not 0 <= self.k <= self.n:
            raise ParameterError(f"要求 0 <= k <= n, 收到 n={self.n}, k={self.k}")

    @property
    def size(self) -> int:
        """|Ω_{k,n}| = binom(n, k)"""
        return comb(self.n, self.k)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def __str__(self) -> str:
        return f"P_{{{self.k},{self.n}}}"

    # ==================== 质量 ====================

    def mass(self, omega: Configuration) -> Fraction:
        if omega.n != self.n:
            raise DimensionError(f"配置长度 {omega.n} 与测度的 n={self.n} 不一致")
        if omega.ones != self.k:
            return Fraction(0)
        return Fraction(1, self.size)

    # ==================== 抽样 ====================

    def sample(self, rng: SeedLike = None) -> Configuration:
        """部分 Fisher-Yates: 只打乱前 k 个位置"""
        rng = as_generator(rng)
        idx = list(range(self.n))
        for i in range(self.k):
            j = int(rng.integers(i, self.n))
            idx[i], idx[j] = idx[j], idx[i]
        return Configuration.from_indices(self.n, idx[: self.k])

    def sample_masks(self, rng: SeedLike, size: int) -> np.ndarray:
        """
        批量抽样

        Returns:
            形状 (size, n) 的布尔矩阵, 每行恰有 k 个 True
        """
        rng = as_generator(rng)
        masks = np.zeros((size, self.n), dtype=bool)
        if self.k == self.n:
            masks[:] = True
        elif self.k > 0:
            keys = rng.random((size, self.n))
            chosen = np.argpartition(keys, self.k - 1, axis=1)[:, : self.k]
            np.put_along_axis(masks, chosen, True, axis=1)
        return masks

    def iter_sample_bits(self, rng: SeedLike, samples: int, batch: Optional[int] = None) -> Iterator[int]:
        """逐个产出打包后的样本"""
        rng = as_generator(rng)
        batch = batch or plugin_config.measures_batch_size
        remaining = samples
        while remaining > 0:
            size = min(batch, remaining)
            yield from masks_to_bits(self.sample_masks(rng, size))
            remaining -= size

    # ==================== 枚举 ====================

    def check_cap(self, cap: Optional[int] = None):
        cap = plugin_config.measures_enumeration_cap if cap is None else cap
        if self.size > cap:
            raise ResourceCapError(f"binom({self.n},{self.k}) = {self.size} 超过枚举上限 {cap}")

    def enumerate_bits(self, cap: Optional[int] = None) -> Iterator[int]:
        """按位串 ω_0 ω_1 ... ω_{n-1} 的字典序产出打包整数"""
        self.check_cap(cap)
        full = self.full_mask
        for zeros in combinations(range(self.n), self.n - self.k):
            bits = full
            for z in zeros:
                bits ^= 1 << z
            yield bits

    def enumerate(self, cap: Optional[int] = None) -> Iterator[Configuration]:
        for bits in self.enumerate_bits(cap):
            yield Configuration(self.n, bits)


# ==================== 不一致点数分布 ====================


@dataclass(frozen=True)
class DisagreementLaw:
    """d(X, Y) 的精确分布, X, Y 独立同分布于 P_{k,n}"""
    n: int
    k: int
    pmf: dict[int, Fraction]

    def mean(self) -> Fraction:
        return sum((d * p for d, p in self.pmf.items()), Fraction(0))

    def prob_below(self, threshold) -> Fraction:
        """P(d < threshold)"""
        threshold = Fraction(threshold)
        return sum((p for d, p in self.pmf.items() if d < threshold), Fraction(0))

    def total(self) -> Fraction:
        return sum(self.pmf.values(), Fraction(0))


def disagreement_distribution(n: int, k: int) -> DisagreementLaw:
    """
    重叠数 j = |X ∩ Y| 服从超几何分布, d = 2 (k - j)

    P(j) = binom(k, j) binom(n - k, k - j) / binom(n, k)
    """
    KOutOfN(n, k)
    total = comb(n, k)
    pmf: dict[int, Fraction] = {}
    for j in range(max(0, 2 * k - n), k + 1):
        weight = comb(k, j) * comb(n - k, k - j)
        if weight:
            pmf[2 * (k - j)] = Fraction(weight, total)
    return DisagreementLaw(n, k, dict(sorted(pmf.items())))

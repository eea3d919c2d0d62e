"""相邻层之间的交换耦合

Z ~ P_{k,m}, 在 Z 的 m-k 个 0 中均匀挑一个改成 1 得到 Z' ~ P_{k+1,m};
共享同一个均匀种子编码两层时得到的正是这个联合分布.
"""

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np
from loguru import logger

from ..measures.configuration import Configuration
from ..measures.measure import KOutOfN
from ..utils.errors import ParameterError
from ..utils.parallel import SeedLike, batch_sizes, run_chunks
from ..utils.stats import total_variation
from .config import plugin_config
from .fmu import encode_fmu_batch


@dataclass(frozen=True)
class CoupledPairLaw:
    """(α, β) -> 质量, α, β 为打包整数"""
    m: int
    k: int
    pmf: dict[tuple[int, int], Fraction]

    def total(self) -> Fraction:
        return sum(self.pmf.values(), Fraction(0))

    def marginal_z(self) -> dict[int, Fraction]:
        out: dict[int, Fraction] = defaultdict(Fraction)
        for (a, _), w in self.pmf.items():
            out[a] += w
        return dict(out)

    def marginal_z_prime(self) -> dict[int, Fraction]:
        out: dict[int, Fraction] = defaultdict(Fraction)
        for (_, b), w in self.pmf.items():
            out[b] += w
        return dict(out)

    def is_monotone(self) -> bool:
        return all(a & ~b == 0 and (b & ~a).bit_count() == 1 for a, b in self.pmf)

    def labelled(self) -> dict[str, Fraction]:
        return {
            f"{Configuration(self.m, a).to_string()}->{Configuration(self.m, b).to_string()}": w
            for (a, b), w in sorted(self.pmf.items())
        }


def coupled_pair_law(m: int, k: int) -> CoupledPairLaw:
    """P(Z=α, Z'=β) = P_{k,m}(α) / (m-k), β 由 α 把一个 0 改成 1 得到"""
    if not 1 <= k <= m - 1:
        raise ParameterError(f"要求 1 <= k <= m-1, 收到 m={m}, k={k}")
    weight = Fraction(1, comb(m, k) * (m - k))
    pmf = {}
    for a in KOutOfN(m, k).enumerate_bits():
        for z in range(m):
            if not (a >> z) & 1:
                pmf[(a, a | (1 << z))] = weight
    return CoupledPairLaw(m, k, pmf)


@dataclass(frozen=True)
class SharedSeedResult:
    m: int
    k: int
    samples: int
    empirical: dict[tuple[int, int], float]
    tv: float
    monotone: bool


def shared_seed_joint(m: int, k: int, samples: int, rng: SeedLike = None, workers: int = 1) -> SharedSeedResult:
    """
    用同一个 U 编码 F^{P_{k,m}}(U) 与 F^{P_{k+1,m}}(U), 统计联合频率

    Returns:
        经验分布, 与 coupled_pair_law 的全变差距离, 以及是否每个样本都满足 Z' >= Z
    """
    law = coupled_pair_law(m, k)
    lower, upper = KOutOfN(m, k), KOutOfN(m, k + 1)
    weights = 1 << np.arange(m, dtype=np.int64)

    def work(size: int, stream: np.random.Generator):
        counts: dict[tuple[int, int], int] = defaultdict(int)
        monotone = True
        for batch in batch_sizes(size, plugin_config.encoding_batch_size):
            u = stream.random((batch, m))
            a = encode_fmu_batch(lower, u)
            b = encode_fmu_batch(upper, u)
            monotone = monotone and not np.any(a & ~b)
            keys = (a.astype(np.int64) @ weights) << m | (b.astype(np.int64) @ weights)
            values, freq = np.unique(keys, return_counts=True)
            for key, c in zip(values.tolist(), freq.tolist()):
                counts[(key >> m, key & ((1 << m) - 1))] += c
        return counts, monotone

    total: dict[tuple[int, int], int] = defaultdict(int)
    monotone = True
    for counts, ok in run_chunks(work, samples, rng, workers):
        monotone = monotone and ok
        for key, c in counts.items():
            total[key] += c
    empirical = {key: c / samples for key, c in sorted(total.items())}
    tv = total_variation(empirical, {key: float(w) for key, w in law.pmf.items()})
    if not monotone:
        logger.error(f"共享种子编码出现 Z' 不大于等于 Z 的样本 (m={m}, k={k})")
    return SharedSeedResult(m, k, samples, empirical, tv, monotone)

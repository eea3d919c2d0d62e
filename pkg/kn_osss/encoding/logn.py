"""A = {最后一个坐标为 1}, k = n/2, 固定顺序树上的混合编码和

Σ_t P(F^μ(V_{<t}, U_{>=t}) 与 F^μ(V_{<=t}, U_{>t}) 恰有一个在 A 中)

这个和按 log n 增长, 而同一实例的 OSSS 括号不超过常数.

蒙特卡洛实现不逐个编码混合种子: 记 W_j 为前 j 个位置用 V, 其余用 U 的编码.
- θ_j: 从位置 j 起只用 U 编码时, 最后一位为 1 所允许的最多剩余 0 个数
  (θ_{n-1} = 0, θ_j = θ_{j+1} + [U_j < (θ_{j+1}+1)/(n-j)])
- z_j: 用 V 编码前 j 个位置后剩余的 0 个数
W_j 的最后一位为 1 当且仅当 z_j <= θ_j, 第 t 项是相邻两个指示是否不同.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Union

import numpy as np
from loguru import logger

from ..measures.events import dictator
from ..measures.measure import KOutOfN
from ..osss.report import OsssReport, verify_osss
from ..trees.tree import fixed_order
from ..utils.errors import ParameterError
from ..utils.parallel import SeedLike, batch_sizes, run_chunks
from ..utils.stats import Estimate, estimate_from_sums
from .config import plugin_config


def _check_even(n: int):
    if n < 2 or n % 2:
        raise ParameterError(f"n 必须是不小于 2 的偶数, 收到 n={n}")


@dataclass(frozen=True)
class LognResult:
    n: int
    terms: tuple[Union[Estimate, Fraction], ...]
    total: Union[Estimate, Fraction]
    mode: str
    samples: Optional[int] = None

    def cumulative(self) -> list[float]:
        out, acc = [], 0.0
        for term in self.terms:
            acc += term.mean if isinstance(term, Estimate) else float(term)
            out.append(acc)
        return out


def last_bit_indicators(u: np.ndarray, v: np.ndarray, k: int) -> np.ndarray:
    """
    Returns:
        形状 (样本数, n) 的布尔矩阵, 第 j 列为 W_j 的最后一位
    """
    size, n = u.shape
    theta = np.zeros((size, n), dtype=np.int64)
    for j in range(n - 2, -1, -1):
        theta[:, j] = theta[:, j + 1] + (u[:, j] < (theta[:, j + 1] + 1) / (n - j))
    zeros = np.empty((size, n), dtype=np.int64)
    zeros[:, 0] = n - k
    for j in range(n - 1):
        zeros[:, j + 1] = zeros[:, j] - (v[:, j] < zeros[:, j] / (n - j))
    return zeros <= theta


def logn_sum_estimate(n: int, samples: int, rng: SeedLike = None, workers: int = 1) -> LognResult:
    """
    每个样本抽一对 (U, V) 并在所有 t 上复用

    Returns:
        逐项估计 (t = 1..n, 第 n 项恒为 0) 与总和的估计, 标准误按样本内的总和计算
    """
    _check_even(n)
    k = n // 2

    def work(size: int, stream: np.random.Generator):
        counts = np.zeros(n, dtype=np.int64)
        total = total_sq = 0
        for batch in batch_sizes(size, plugin_config.encoding_batch_size):
            u = stream.random((batch, n))
            v = stream.random((batch, n))
            bits = last_bit_indicators(u, v, k)
            diff = bits[:, :-1] != bits[:, 1:]
            counts[: n - 1] += diff.sum(axis=0)
            per_sample = diff.sum(axis=1)
            total += int(per_sample.sum())
            total_sq += int((per_sample ** 2).sum())
        return counts, total, total_sq

    chunks = run_chunks(work, samples, rng, workers)
    counts = np.sum([c[0] for c in chunks], axis=0)
    total = sum(c[1] for c in chunks)
    total_sq = sum(c[2] for c in chunks)
    terms = tuple(estimate_from_sums(int(c), int(c), samples) for c in counts)
    result = LognResult(n, terms, estimate_from_sums(total, total_sq, samples), "monte-carlo", samples)
    logger.info(f"n={n}: 混合和 ≈ {result.total.mean:.4f} ± {result.total.stderr:.4f}")
    return result


def logn_sum_exact(n: int) -> LognResult:
    """
    t < n 时第 t 项 = E[2 (z/s)(1 - z/s)] / (n - t),
    z 为前 t-1 个位置之后剩余的 0 个数, s = n - t + 1
    """
    _check_even(n)
    k = n // 2
    size = comb(n, k)
    terms = []
    for t in range(1, n):
        s = n - t + 1
        acc = 0
        for a in range(t):
            z = n - k - a
            if 0 <= z <= s:
                acc += comb(t - 1, a) * comb(s, z) * z * (s - z)
        terms.append(Fraction(2 * acc, size * s * s * (n - t)))
    terms.append(Fraction(0))
    return LognResult(n, tuple(terms), sum(terms, Fraction(0)), "exact")


def logn_bracket(n: int, samples: Optional[int] = None, seed: SeedLike = None, workers: int = 1) -> OsssReport:
    """同一实例上的 OSSS 报告; binom(n, n/2) 不超过上限时精确计算"""
    _check_even(n)
    measure = KOutOfN(n, n // 2)
    event = dictator(n, n - 1)
    tree = fixed_order(range(n))
    if measure.size <= plugin_config.encoding_exact_bracket_cap:
        return verify_osss(event, tree, measure, engine="exact")
    samples = samples or plugin_config.encoding_bracket_samples
    return verify_osss(event, tree, measure, engine="mc", samples=samples, seed=seed, workers=workers)

"""F^μ 编码

按位置顺序逐个决定取值: 第 t 位取 0 当且仅当 u_t < (剩余 0 的个数) / (剩余位置数).
输入独立均匀时输出恰好服从 P_{k,n}.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from ..measures.configuration import Configuration
from ..measures.measure import KOutOfN
from ..utils.errors import DimensionError, ParameterError
from ..utils.parallel import SeedLike, as_generator


@dataclass(frozen=True)
class UniformSeed:
    u: tuple[float, ...]

    def __post_init__(self):
        for i, x in enumerate(self.u):
            if not 0.0 <= x < 1.0:
                raise ParameterError(f"u[{i}] = {x} 不在 [0, 1) 内")

    def __len__(self) -> int:
        return len(self.u)

    @classmethod
    def draw(cls, m: int, rng: SeedLike = None) -> "UniformSeed":
        return cls(tuple(float(x) for x in as_generator(rng).random(m)))

    @classmethod
    def of(cls, values: Union["UniformSeed", Sequence[float]]) -> "UniformSeed":
        return values if isinstance(values, UniformSeed) else cls(tuple(float(x) for x in values))


def encode_fmu(measure: KOutOfN, u: Union[UniformSeed, Sequence[float]]) -> Configuration:
    """
    精确比较: 阈值是有理数, u 按其二进制值转成 Fraction; u 等于阈值时取 1

    Raises:
        DimensionError: |u| != n
    """
    seed = UniformSeed.of(u)
    n = measure.n
    if len(seed) != n:
        raise DimensionError(f"|u| = {len(seed)} 与 n = {n} 不一致")
    zeros = n - measure.k
    bits = 0
    for t, x in enumerate(seed.u):
        if Fraction(x) < Fraction(zeros, n - t):
            zeros -= 1
        else:
            bits |= 1 << t
    return Configuration(n, bits)


def encode_fmu_batch(measure: KOutOfN, u: np.ndarray) -> np.ndarray:
    """
    Args:
        u: 形状 (样本数, n) 的均匀数

    Returns:
        同形状的布尔矩阵, 每行恰有 k 个 True
    """
    u = np.asarray(u, dtype=float)
    n = measure.n
    if u.ndim != 2 or u.shape[1] != n:
        raise DimensionError(f"u 的形状 {u.shape} 与 n = {n} 不一致")
    out = np.ones(u.shape, dtype=bool)
    zeros = np.full(u.shape[0], n - measure.k, dtype=np.int64)
    for t in range(n):
        take = u[:, t] < zeros / (n - t)
        out[take, t] = False
        zeros -= take
    return out


def hybrid_encodings(measure: KOutOfN, u: Union[UniformSeed, Sequence[float]],
                     v: Union[UniformSeed, Sequence[float]], t: int) -> tuple[Configuration, Configuration]:
    """
    第 t 个 (1..n) 混合对: F^μ(V_{<t}, U_{>=t}) 与 F^μ(V_{<=t}, U_{>t})

    两者只在第 t 个坐标的种子上不同
    """
    u, v = UniformSeed.of(u), UniformSeed.of(v)
    n = measure.n
    if len(u) != n or len(v) != n:
        raise DimensionError(f"|U| = {len(u)}, |V| = {len(v)} 与 n = {n} 不一致")
    if not 1 <= t <= n:
        raise ParameterError(f"t 必须在 1..{n} 内, 收到 {t}")
    before = v.u[: t - 1] + u.u[t - 1:]
    after = v.u[:t] + u.u[t:]
    return encode_fmu(measure, before), encode_fmu(measure, after)

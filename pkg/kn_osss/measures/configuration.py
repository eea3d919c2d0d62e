"""0/1 配置

元素 e 对应整数 bits 的第 e 位; 字符串形式从 ω_0 开始书写, 例如 "0101" 表示 ω_1 = ω_3 = 1
"""

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from ..utils.errors import DimensionError, ElementIndexError, ParameterError


@dataclass(frozen=True, slots=True)
class Configuration:
    """长度为 n 的 0/1 配置, 按位打包, 缓存 1 的个数"""
    n: int
    bits: int
    ones: int = field(init=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"基集大小必须为正, 收到 n={self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise DimensionError(f"配置 {self.bits:#b} 超出长度 n={self.n}")
        object.__setattr__(self, "ones", self.bits.bit_count())

    # ==================== 构造 ====================

    @classmethod
    def from_string(cls, text: str) -> "Configuration":
        if not text or any(ch not in "01" for ch in text):
            raise ParameterError(f"配置字符串只能由 0/1 组成: {text!r}")
        bits = 0
        for i, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << i
        return cls(len(text), bits)

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "Configuration":
        bits = 0
        for e in indices:
            if not 0 <= e < n:
                raise ElementIndexError(f"元素 {e} 不在 0..{n - 1} 内")
            bits |= 1 << e
        return cls(n, bits)

    @classmethod
    def from_array(cls, values) -> "Configuration":
        arr = np.asarray(values).astype(bool).ravel()
        packed = np.packbits(arr, bitorder="little")
        return cls(arr.size, int.from_bytes(packed.tobytes(), "little"))

    @classmethod
    def zeros(cls, n: int) -> "Configuration":
        return cls(n, 0)

    # ==================== 访问 ====================

    def _check(self, e: int):
        if not 0 <= e < self.n:
            raise ElementIndexError(f"元素 {e} 不在 0..{self.n - 1} 内")

    def __getitem__(self, e: int) -> int:
        self._check(e)
        return (self.bits >> e) & 1

    def __len__(self) -> int:
        return self.n

    def __str__(self) -> str:
        return self.to_string()

    def to_string(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.n))

    def to_array(self) -> np.ndarray:
        return np.array([(self.bits >> i) & 1 for i in range(self.n)], dtype=np.uint8)

    def support(self) -> tuple[int, ...]:
        """取值为 1 的元素"""
        return tuple(i for i in range(self.n) if (self.bits >> i) & 1)

    # ==================== 变换 ====================

    def flip(self, e: int) -> "Configuration":
        """ω^(e): 把 ω_e 换成 1 - ω_e"""
        self._check(e)
        return Configuration(self.n, self.bits ^ (1 << e))

    def swap(self, e: int, f: int) -> "Configuration":
        """ω^(e,f): 交换 ω_e 与 ω_f"""
        self._check(e)
        self._check(f)
        if ((self.bits >> e) ^ (self.bits >> f)) & 1:
            return Configuration(self.n, self.bits ^ ((1 << e) | (1 << f)))
        return self

    def with_value(self, e: int, value: int) -> "Configuration":
        self._check(e)
        if value:
            return Configuration(self.n, self.bits | (1 << e))
        return Configuration(self.n, self.bits & ~(1 << e))

    def leq(self, other: "Configuration") -> bool:
        """逐坐标 ω <= σ"""
        if other.n != self.n:
            raise DimensionError(f"长度不一致: {self.n} 与 {other.n}")
        return self.bits & ~other.bits == 0


def flip(omega: Configuration, e: int) -> Configuration:
    return omega.flip(e)


def swap(omega: Configuration, e: int, f: int) -> Configuration:
    return omega.swap(e, f)


def masks_to_bits(masks: np.ndarray) -> list[int]:
    """把 (样本数, n) 的布尔矩阵逐行打包成整数"""
    masks = np.asarray(masks, dtype=bool)
    packed = np.packbits(masks, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def bits_to_mask(bits: int, n: int) -> np.ndarray:
    raw = bits.to_bytes((n + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), count=n, bitorder="little").astype(bool)

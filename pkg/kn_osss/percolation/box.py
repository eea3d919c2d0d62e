"""R×R 三角格盒子 V_R

顶点 x + y·e^{iπ/3}, 0 <= x, y <= R-1, 编号 v = y·R + x; 数组一律按 [y, x] 排列.
距离为 1 的六个方向在轴坐标下是 (±1, 0), (0, ±1), (1, -1), (-1, 1).
"""

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from ..measures.configuration import Configuration, bits_to_mask
from ..utils.errors import DimensionError, ElementIndexError, ParameterError


OFFSETS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))

# ndimage.label 的邻接结构, 下标为 [dy+1, dx+1]
STRUCTURE = np.ones((3, 3), dtype=bool)
STRUCTURE[0, 0] = STRUCTURE[2, 2] = False

# 批量标记用: 只在中间一层有邻接, 样本之间互不连通
BATCH_STRUCTURE = np.zeros((3, 3, 3), dtype=bool)
BATCH_STRUCTURE[1] = STRUCTURE

Omega = Union[Configuration, int, np.ndarray]


@dataclass(frozen=True, eq=False)
class TriangularBox:
    R: int
    neighbors: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def n(self) -> int:
        return self.R * self.R

    def index(self, x: int, y: int) -> int:
        if not self.contains(x, y):
            raise ElementIndexError(f"({x}, {y}) 不在 V_{self.R} 内")
        return y * self.R + x

    def coords(self, v: int) -> tuple[int, int]:
        if not 0 <= v < self.n:
            raise ElementIndexError(f"顶点 {v} 不在 0..{self.n - 1} 内")
        y, x = divmod(v, self.R)
        return x, y

    def contains(self, x: int, y: int) -> bool:
        return 0 <= x < self.R and 0 <= y < self.R

    @property
    def left(self) -> frozenset[int]:
        return frozenset(y * self.R for y in range(self.R))

    @property
    def right(self) -> frozenset[int]:
        return frozenset(y * self.R + self.R - 1 for y in range(self.R))

    @property
    def bottom(self) -> frozenset[int]:
        return frozenset(range(self.R))

    @property
    def top(self) -> frozenset[int]:
        return frozenset(range(self.n - self.R, self.n))

    def edges(self) -> list[tuple[int, int]]:
        return [(v, w) for v, nbrs in enumerate(self.neighbors) for w in nbrs if v < w]

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    def to_bits(self, omega: Omega) -> int:
        if isinstance(omega, Configuration):
            if omega.n != self.n:
                raise DimensionError(f"配置长度 {omega.n} 与 R^2 = {self.n} 不一致")
            return omega.bits
        if isinstance(omega, (int, np.integer)):
            return int(omega)
        grid = np.asarray(omega, dtype=bool).reshape(-1)
        if grid.size != self.n:
            raise DimensionError(f"数组大小 {grid.size} 与 R^2 = {self.n} 不一致")
        return Configuration.from_array(grid).bits

    def to_grid(self, omega: Omega) -> np.ndarray:
        """[y, x] 排列的占据矩阵"""
        if isinstance(omega, np.ndarray) and omega.shape == (self.R, self.R):
            return omega.astype(bool)
        return bits_to_mask(self.to_bits(omega), self.n).reshape(self.R, self.R)


def build_box(R: int) -> TriangularBox:
    if R < 1:
        raise ParameterError(f"边长必须为正, 收到 R={R}")
    neighbors = []
    for y in range(R):
        for x in range(R):
            neighbors.append(tuple(
                (y + dy) * R + (x + dx)
                for dx, dy in OFFSETS
                if 0 <= x + dx < R and 0 <= y + dy < R
            ))
    return TriangularBox(R, tuple(neighbors))

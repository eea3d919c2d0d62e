"""横向穿越事件 A_R 与 0-关键点

- has_horizontal_crossing: 并查集参考实现, 左右两侧各挂一个虚拟节点
- batch_*: 用 ndimage.label 一次标记整批样本, 供蒙特卡洛实验使用
- count_zero_pivotal: 按定义逐个翻转空点重算 (flip), 或由邻居分支的触边信息直接判定 (labels)
- four_arm_witness: 两条占据臂通向左右, 两条空臂通向上下
"""

from typing import Sequence

import numpy as np
from scipy import ndimage

from ..measures.events import IncreasingEvent
from ..utils.errors import ParameterError
from .box import BATCH_STRUCTURE, OFFSETS, STRUCTURE, Omega, TriangularBox


class UnionFind:
    """按秩合并 + 路径压缩, 元素为 0..size-1"""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return ra

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


def _spans(box: TriangularBox, bits: int, state: int, start: frozenset[int], end: frozenset[int]) -> bool:
    """取值为 state 的顶点中是否有路径连接 start 与 end 两条边"""
    n = box.n
    uf = UnionFind(n + 2)
    source, sink = n, n + 1
    for v in range(n):
        if (bits >> v) & 1 != state:
            continue
        if v in start:
            uf.union(source, v)
        if v in end:
            uf.union(sink, v)
        for w in box.neighbors[v]:
            if w > v and (bits >> w) & 1 == state:
                uf.union(v, w)
    return uf.connected(source, sink)


def has_horizontal_crossing(box: TriangularBox, omega: Omega) -> bool:
    return _spans(box, box.to_bits(omega), 1, box.left, box.right)


def has_vertical_vacant_crossing(box: TriangularBox, omega: Omega) -> bool:
    return _spans(box, box.to_bits(omega), 0, box.bottom, box.top)


def duality_holds(box: TriangularBox, omega: Omega) -> bool:
    """占据横穿与空竖穿恰有一个发生"""
    return has_horizontal_crossing(box, omega) != has_vertical_vacant_crossing(box, omega)


# ==================== 批量标记 ====================


def label_batch(grids: np.ndarray) -> np.ndarray:
    """
    Args:
        grids: 形状 (样本数, R, R) 的布尔数组

    Returns:
        同形状的分支编号, 0 表示不在集合中; 不同样本的编号互不相同
    """
    labels, _ = ndimage.label(np.asarray(grids, dtype=bool), structure=BATCH_STRUCTURE)
    return labels


def _touching(labels: np.ndarray, edge: np.ndarray) -> np.ndarray:
    """按编号给出 "该分支触到 edge" 的查找表"""
    table = np.zeros(int(labels.max()) + 1, dtype=bool)
    table[edge[edge > 0]] = True
    table[0] = False
    return table


def batch_crossings(grids: np.ndarray) -> np.ndarray:
    grids = np.asarray(grids, dtype=bool)
    labels = label_batch(grids)
    left = _touching(labels, labels[:, :, 0])
    return left[labels[:, :, -1]].any(axis=1)


def batch_vertical_vacant_crossings(grids: np.ndarray) -> np.ndarray:
    labels = label_batch(~np.asarray(grids, dtype=bool))
    bottom = _touching(labels, labels[:, 0, :])
    return bottom[labels[:, -1, :]].any(axis=1)


def _shifted(labels: np.ndarray, dx: int, dy: int) -> np.ndarray:
    """out[:, y, x] = labels[:, y+dy, x+dx], 越界为 0"""
    R = labels.shape[1]
    padded = np.pad(labels, ((0, 0), (1, 1), (1, 1)))
    return padded[:, 1 + dy:1 + dy + R, 1 + dx:1 + dx + R]


def batch_zero_pivotal(grids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    空点 v 是 0-关键的当且仅当当前没有横穿, 且 v 与其占据邻居的分支合起来同时触到左右两侧

    Returns:
        (每个样本是否横穿, 形状 (样本数, R, R) 的 0-关键指示)
    """
    grids = np.asarray(grids, dtype=bool)
    R = grids.shape[1]
    labels = label_batch(grids)
    to_left = _touching(labels, labels[:, :, 0])
    to_right = _touching(labels, labels[:, :, -1])
    crossing = to_left[labels[:, :, -1]].any(axis=1)

    reach_left = np.zeros(grids.shape, dtype=bool)
    reach_right = np.zeros(grids.shape, dtype=bool)
    reach_left[:, :, 0] = True
    reach_right[:, :, R - 1] = True
    for dx, dy in OFFSETS:
        nb = _shifted(labels, dx, dy)
        reach_left |= to_left[nb]
        reach_right |= to_right[nb]
    pivotal = ~grids & reach_left & reach_right & ~crossing[:, None, None]
    return crossing, pivotal


# ==================== 单个配置 ====================


def zero_pivotal_sites(box: TriangularBox, omega: Omega) -> list[int]:
    bits = box.to_bits(omega)
    _, pivotal = batch_zero_pivotal(box.to_grid(bits)[None])
    return [int(v) for v in np.flatnonzero(pivotal[0])]


def count_zero_pivotal(box: TriangularBox, omega: Omega, method: str = "flip") -> int:
    """
    Args:
        method: "flip" 逐个翻转空点并重算穿越; "labels" 用分支触边信息一次判定
    """
    bits = box.to_bits(omega)
    if method == "labels":
        return len(zero_pivotal_sites(box, bits))
    if method != "flip":
        raise ParameterError(f"未知方法 {method!r}, 可选 flip / labels")
    if has_horizontal_crossing(box, bits):
        return 0
    return sum(
        1 for v in range(box.n)
        if not (bits >> v) & 1 and has_horizontal_crossing(box, bits | (1 << v))
    )


def four_arm_witness(box: TriangularBox, omega: Omega, v: int) -> bool:
    """
    v 为空点时检查四臂结构: v 的占据邻居所在分支分别触到左侧和右侧,
    去掉 v 后 v 的空邻居所在分支分别触到上侧和下侧; v 本身在某条边上时对应的臂自动成立

    Raises:
        ParameterError: ω_v = 1
    """
    grid = box.to_grid(omega)
    x, y = box.coords(v)
    if grid[y, x]:
        raise ParameterError(f"四臂检查要求 ω_v = 0, 顶点 {v} 已被占据")
    R = box.R
    occupied, _ = ndimage.label(grid, structure=STRUCTURE)
    vacant_grid = ~grid
    vacant_grid[y, x] = False
    vacant, _ = ndimage.label(vacant_grid, structure=STRUCTURE)

    def arm(labels: np.ndarray, edge: np.ndarray) -> bool:
        targets = set(edge[edge > 0].tolist())
        for dx, dy in OFFSETS:
            if box.contains(x + dx, y + dy):
                lab = labels[y + dy, x + dx]
                if lab and lab in targets:
                    return True
        return False

    return (
        (x == 0 or arm(occupied, occupied[:, 0]))
        and (x == R - 1 or arm(occupied, occupied[:, R - 1]))
        and (y == 0 or arm(vacant, vacant[0, :]))
        and (y == R - 1 or arm(vacant, vacant[R - 1, :]))
    )


def crossing_event(box: TriangularBox) -> IncreasingEvent:
    """A_R 作为 n = R^2 上的递增事件, 附带按分支计算的 0-关键点"""

    def oracle(bits: int) -> bool:
        return has_horizontal_crossing(box, bits)

    def pivotals(bits: int) -> Sequence[int]:
        return zero_pivotal_sites(box, bits)

    return IncreasingEvent(name=f"crossing_R{box.R}", n=box.n, oracle=oracle, pivotal_oracle=pivotals)

"""探索路径决策树 T_{v0}

在六边形表示上沿界面行走: 白 = 占据, 黑 = 空. 锚点 v0 = (R-1, y0) 在右侧.

行走状态是一对相邻六边形 (r, l), r 是 rc 色一侧, l 是另一侧, l - r = D[i];
下一个查看的六边形是 c = r + D[i-1], c 为 rc 色时 r <- c, 否则 l <- c.

盒子外的颜色:
- x < 0: 白
- x >= R: β 在 y >= y0 为白, β' 在 y <= y0-1 为白
- 其余 (上下两侧之外): 黑

β (rc = 白) 的右侧走到 x < 0 时存在从 y >= y0 部分到左侧的横穿, 左侧走进上方外部时不存在.
β' (rc = 黑) 的白侧走到 x < 0 时存在从 y <= y0 部分到左侧的横穿, 黑侧走进下方外部时不存在.
T_{v0} 先走 β, 只有 β 给出否定结果时再走 β', 已查看的六边形不重复查询.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from loguru import logger

from ..measures.configuration import Configuration
from ..trees.tau import run_tree
from ..trees.tree import DecisionTree
from ..utils.errors import ElementIndexError, TreeDefinitionError
from ..utils.parallel import map_tasks
from .box import Omega, TriangularBox
from .config import plugin_config
from .crossing import batch_crossings, batch_vertical_vacant_crossings, crossing_event, has_horizontal_crossing


DIRECTIONS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))

Color = Callable[[int, int], bool]


class _Unrevealed(Exception):
    def __init__(self, site: int):
        super().__init__(site)
        self.site = site


def _step_cap(R: int) -> int:
    return plugin_config.percolation_step_cap_factor * (R + 2) ** 2 + 10


def _walk(R: int, y0: int, color: Color, upper: bool) -> bool:
    """
    单条界面行走

    Args:
        color: 盒内六边形 (x, y) -> 是否为白
        upper: True 为 β, False 为 β'
    """
    white_side = upper

    def paint(x: int, y: int) -> bool:
        if x < 0:
            return True
        if x >= R:
            return y >= y0 if upper else y <= y0 - 1
        if y < 0 or y >= R:
            return False
        return color(x, y)

    r, l, i = (R, y0), (R, y0 - 1), 4
    for _ in range(_step_cap(R)):
        dx, dy = DIRECTIONS[(i - 1) % 6]
        c = (r[0] + dx, r[1] + dy)
        if paint(*c) == white_side:
            r, i = c, (i + 1) % 6
        else:
            l, i = c, (i - 1) % 6
        white, black = (r, l) if upper else (l, r)
        if white[0] < 0:
            return True
        if upper and 0 <= black[0] < R and black[1] >= R:
            return False
        if not upper and 0 <= black[0] < R and black[1] < 0:
            return False
    raise TreeDefinitionError(f"界面行走超过步数上限 {_step_cap(R)} (R={R}, y0={y0}, {'β' if upper else 'β′'})")


def _check_anchor(box: TriangularBox, y0: int):
    if not 0 <= y0 < box.R:
        raise ElementIndexError(f"锚点 y0 = {y0} 不在 0..{box.R - 1} 内")


@dataclass(frozen=True)
class ExplorationResult:
    decision: bool
    examined: tuple[int, ...]
    upper_only: bool


def explore(box: TriangularBox, omega: Omega, y0: int) -> ExplorationResult:
    """在给定配置上运行 T_{v0} 的两条行走, 记录按顺序查看过的盒内顶点"""
    _check_anchor(box, y0)
    grid = box.to_grid(omega)
    R = box.R
    seen: dict[int, None] = {}

    def color(x: int, y: int) -> bool:
        seen.setdefault(y * R + x)
        return bool(grid[y, x])

    if _walk(R, y0, color, upper=True):
        return ExplorationResult(True, tuple(seen), True)
    decision = _walk(R, y0, color, upper=False)
    return ExplorationResult(decision, tuple(seen), False)


@dataclass(frozen=True, eq=False)
class ExplorationTree:
    box: TriangularBox
    y0: int
    tree: DecisionTree = field(repr=False)

    @property
    def anchor(self) -> int:
        return self.y0 * self.box.R + self.box.R - 1

    def decide(self, omega: Omega) -> bool:
        return explore(self.box, omega, self.y0).decision


def exploration_tree(box: TriangularBox, y0: int) -> ExplorationTree:
    """
    把 T_{v0} 包装成 DecisionTree: 后继规则用已揭示的取值重放行走, 遇到第一个未揭示的
    盒内六边形即为下一个查询; 行走结束后按编号补齐剩余顶点
    """
    _check_anchor(box, y0)
    R = box.R

    def successor(order: tuple[int, ...], values: tuple[int, ...]) -> int:
        revealed = dict(zip(order, values))

        def color(x: int, y: int) -> bool:
            v = y * R + x
            if v not in revealed:
                raise _Unrevealed(v)
            return bool(revealed[v])

        try:
            if not _walk(R, y0, color, upper=True):
                _walk(R, y0, color, upper=False)
        except _Unrevealed as need:
            return need.site
        return min(v for v in range(box.n) if v not in revealed)

    anchor = y0 * R + R - 1
    tree = DecisionTree(box.n, anchor, successor, name=f"exploration_R{R}_y{y0}")
    return ExplorationTree(box, y0, tree)


# ==================== 停时 ====================


def _determined(box: TriangularBox, grid: np.ndarray, revealed: Sequence[int]) -> bool:
    """只看 revealed 上的取值时横穿是否已确定 (比较全空与全占补全)"""
    low = np.zeros(box.n, dtype=bool)
    high = np.ones(box.n, dtype=bool)
    flat = grid.reshape(-1)
    idx = np.asarray(revealed, dtype=np.int64)
    low[idx] = flat[idx]
    high[idx] = flat[idx]
    pair = np.stack([low, high]).reshape(2, box.R, box.R)
    crossing = batch_crossings(pair)
    return bool(crossing[0] == crossing[1])


def minimal_tau(box: TriangularBox, omega: Omega, examined: Sequence[int]) -> int:
    """
    沿查看顺序的最短确定前缀长度, 即 T_{v0} 的 τ

    Raises:
        TreeDefinitionError: 全部查看后仍未确定
    """
    grid = box.to_grid(omega)
    if not examined or not _determined(box, grid, examined):
        raise TreeDefinitionError(f"探索结束后横穿仍未确定 (查看了 {len(examined)} 个顶点)")
    lo, hi = 1, len(examined)
    while lo < hi:
        mid = (lo + hi) // 2
        if _determined(box, grid, examined[:mid]):
            hi = mid
        else:
            lo = mid + 1
    return lo


# ==================== 一致性检查 ====================


@dataclass(frozen=True)
class AgreementReport:
    R: int
    anchors: tuple[int, ...]
    checked: int
    mismatches: int
    duality_failures: int
    tree_mismatches: int = 0
    examples: tuple[str, ...] = field(default_factory=tuple)

    @property
    def holds(self) -> bool:
        return self.mismatches == 0 and self.duality_failures == 0 and self.tree_mismatches == 0


def check_exploration_agreement(box: TriangularBox, configurations: Sequence[int],
                                anchors: Optional[Sequence[int]] = None, with_tree: bool = False,
                                workers: int = 1) -> AgreementReport:
    """
    逐个配置比较探索结果与并查集判定, 同时检查对偶性

    Args:
        configurations: 打包整数列表
        with_tree: 同时用 DecisionTree 包装重放, 查询顺序须等于游走查看序列的最短确定前缀 (只适合小 R)
    """
    anchors = tuple(range(box.R)) if anchors is None else tuple(anchors)
    trees = {y0: exploration_tree(box, y0) for y0 in anchors} if with_tree else {}
    event = crossing_event(box)

    def check(bits: int) -> tuple[int, int, list[str]]:
        truth = has_horizontal_crossing(box, bits)
        bad = tree_bad = 0
        notes = []
        for y0 in anchors:
            result = explore(box, bits, y0)
            if result.decision != truth:
                bad += 1
                notes.append(f"y0={y0}, ω={Configuration(box.n, bits).to_string()}")
            if with_tree:
                transcript = run_tree(trees[y0].tree, event, Configuration(box.n, bits))
                tau = minimal_tau(box, bits, result.examined)
                if transcript.tau != tau or transcript.order != tuple(result.examined[:tau]):
                    tree_bad += 1
                    notes.append(f"y0={y0}, 树的前缀与游走不一致, ω={Configuration(box.n, bits).to_string()}")
        return bad, tree_bad, notes

    configurations = list(configurations)
    results = map_tasks(check, configurations, workers)
    duality_failures = 0
    if configurations:
        grids = np.stack([box.to_grid(bits) for bits in configurations])
        duality_failures = int(np.sum(batch_crossings(grids) == batch_vertical_vacant_crossings(grids)))
    mismatches = sum(r[0] for r in results)
    notes = [note for r in results for note in r[2]][:5]
    report = AgreementReport(
        R=box.R,
        anchors=anchors,
        checked=len(configurations),
        mismatches=mismatches,
        duality_failures=duality_failures,
        tree_mismatches=sum(r[1] for r in results),
        examples=tuple(notes),
    )
    if not report.holds:
        logger.error(f"R={box.R}: 探索判定不一致 {mismatches} 次, 树前缀不一致 {report.tree_mismatches} 次, 对偶性失败 {duality_failures} 次: {notes}")
    return report


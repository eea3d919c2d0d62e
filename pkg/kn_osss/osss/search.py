"""经验常数搜索

对 (事件, 树, 测度) 网格逐一做精确验证, 汇总 lhs / bracket 的最大值.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Callable, Iterable, Optional, Sequence

from loguru import logger

from ..measures.events import IncreasingEvent, default_event_suite
from ..measures.influence import influences_exact, probability_exact
from ..measures.measure import KOutOfN
from ..trees.revealment import revealments_exact
from ..trees.tau import TauLike
from ..trees.tree import DecisionTree, default_tree_suite
from ..utils.errors import DimensionError
from ..utils.parallel import map_tasks
from .config import plugin_config
from .report import Number, OsssReport, constant_key, assemble_exact


EventSuite = Callable[[int], Sequence[IncreasingEvent]]
TreeSuite = Callable[[int], Sequence[DecisionTree]]


@dataclass(frozen=True)
class SearchResult:
    rows: tuple[OsssReport, ...]
    max_by_measure: dict[str, Number]
    global_max: Number
    by_epsilon: dict[str, Number]
    holds_at: dict[str, bool]
    worst: Optional[OsssReport] = field(default=None, repr=False)


def _measure_key(measure: KOutOfN) -> str:
    return f"{measure.n},{measure.k}"


def _max_ratio(rows: Iterable[OsssReport]) -> Number:
    best: Number = Fraction(0)
    for row in rows:
        if row.ratio > best:
            best = row.ratio
    return best


def search_constant(event_suite: Optional[EventSuite] = None, tree_suite: Optional[TreeSuite] = None,
                    measure_grid: Sequence[KOutOfN] = (), constants: Optional[Iterable[float]] = None,
                    tau_variant: TauLike = "standard", workers: int = 1,
                    epsilon_grid: Optional[Sequence[float]] = None) -> SearchResult:
    """
    Args:
        event_suite: n -> 事件列表, 默认 default_event_suite(n, 200)
        tree_suite: n -> 树列表, 默认 default_tree_suite(n, 3)
        measure_grid: 待扫描的 P_{k,n}
        epsilon_grid: 第二部分的 ε 分层, 只统计 εn <= k <= (1-ε)n 的测度

    Returns:
        每个实例一行, 各 (n,k) 的最大比值, 全局最大, ε 分层最大, 以及全部实例在各常数下是否成立
    """
    event_suite = event_suite or partial(default_event_suite, size=200)
    tree_suite = tree_suite or partial(default_tree_suite, count=3)
    epsilon_grid = list(plugin_config.osss_epsilon_grid if epsilon_grid is None else epsilon_grid)
    constants = list(plugin_config.osss_constants if constants is None else constants)

    rows: list[OsssReport] = []
    for measure in measure_grid:
        events = list(event_suite(measure.n))
        trees = list(tree_suite(measure.n))
        for item in (*events, *trees):
            if item.n != measure.n:
                raise DimensionError(f"{item.name} 定义在 n={item.n} 上, 测度为 n={measure.n}")

        # 影响力只依赖事件, 按事件缓存
        def event_stats(event: IncreasingEvent, measure: KOutOfN = measure):
            return probability_exact(event, measure), influences_exact(event, measure)

        cached = map_tasks(event_stats, events, workers)

        def evaluate(task, measure: KOutOfN = measure) -> OsssReport:
            (event, (p, influences)), tree = task
            revealments = revealments_exact(tree, event, measure, tau_variant)
            return assemble_exact(event, tree, measure, p, influences, revealments, constants)

        tasks = [(pair, tree) for pair in zip(events, cached) for tree in trees]
        part = map_tasks(evaluate, tasks, workers)
        logger.info(f"P_{{{measure.k},{measure.n}}}: {len(part)} 个实例, 最大比值 {float(_max_ratio(part)):.6g}")
        rows.extend(part)

    max_by_measure = {}
    for measure in measure_grid:
        key = _measure_key(measure)
        max_by_measure[key] = _max_ratio(r for r in rows if (r.n, r.k) == (measure.n, measure.k))
    by_epsilon = {
        repr(eps): _max_ratio(r for r in rows if eps * r.n <= r.k <= (1 - eps) * r.n)
        for eps in epsilon_grid
    }
    global_max = _max_ratio(rows)
    worst = max(rows, key=lambda r: r.ratio, default=None)
    holds_at = {constant_key(c): all(r.holds_for(c) for r in rows) for c in constants}
    if global_max == math.inf:
        logger.error(f"存在括号为 0 而 lhs > 0 的实例: {worst.event} / {worst.tree}")
    return SearchResult(
        rows=tuple(rows),
        max_by_measure=max_by_measure,
        global_max=global_max,
        by_epsilon=by_epsilon,
        holds_at=holds_at,
        worst=worst,
    )

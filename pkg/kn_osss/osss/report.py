"""OSSS 不等式两侧的组装

P(A)(1-P(A)) <= C (Σ_e I(e) δ_e + Σ_e I(e) δ̄)

精确引擎直接组合 measures 与 trees 的精确值; 蒙特卡洛引擎用两条独立随机流分别抽取
影响力样本与揭示样本, 对括号与比值给出 delta 方法标准误.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from loguru import logger

from ..measures.events import IncreasingEvent
from ..measures.influence import InfluenceVector, influences_exact, probability_exact
from ..measures.measure import KOutOfN
from ..trees.revealment import RevealmentVector, collect_revealed, revealments_exact
from ..trees.tau import TauLike
from ..trees.tree import DecisionTree
from ..utils.errors import DimensionError, ParameterError
from ..utils.parallel import SeedLike, derive_seed, run_chunks
from .config import plugin_config


Number = Union[Fraction, float]


def constant_key(c: float) -> str:
    c = float(c)
    return str(int(c)) if c.is_integer() else repr(c)


@dataclass(frozen=True)
class OsssReport:
    event: str
    tree: str
    n: int
    k: int
    lhs: Number
    weighted_term: Number
    average_term: Number
    rhs_bracket: Number
    ratio: Number
    holds_at: dict[str, bool]
    mode: str
    degenerate: bool = False
    p_event: Optional[Number] = None
    influences: tuple[Number, ...] = field(default_factory=tuple, repr=False)
    revealments: tuple[Number, ...] = field(default_factory=tuple, repr=False)
    average_revealment: Optional[Number] = None
    samples: Optional[int] = None
    lhs_stderr: Optional[float] = None
    bracket_stderr: Optional[float] = None
    ratio_stderr: Optional[float] = None

    @property
    def c20_applicable(self) -> bool:
        return self.n >= plugin_config.osss_c20_min_n

    def holds_for(self, constant: float) -> bool:
        return _holds(self.lhs, self.rhs_bracket, constant)

    def holds_within_error(self, constant: float, sigmas: Optional[float] = None) -> bool:
        """蒙特卡洛报告: lhs - C * bracket <= sigmas * sqrt(se_lhs^2 + C^2 se_bracket^2)"""
        if self.mode == "exact":
            return self.holds_for(constant)
        sigmas = plugin_config.osss_mc_sigmas if sigmas is None else sigmas
        se = math.hypot(self.lhs_stderr or 0.0, constant * (self.bracket_stderr or 0.0))
        return float(self.lhs) - constant * float(self.rhs_bracket) <= sigmas * se + 1e-12


def _holds(lhs: Number, bracket: Number, constant: float) -> bool:
    if isinstance(lhs, Fraction) and isinstance(bracket, Fraction):
        return lhs <= Fraction(constant) * bracket
    return float(lhs) <= float(constant) * float(bracket)


def _ratio(lhs: Number, bracket: Number) -> Number:
    if bracket == 0:
        return math.inf if lhs > 0 else Fraction(0) if isinstance(lhs, Fraction) else 0.0
    return lhs / bracket


def _constants(constants: Optional[Iterable[float]]) -> list[float]:
    return list(plugin_config.osss_constants if constants is None else constants)


# ==================== 精确引擎 ====================


def assemble_exact(event: IncreasingEvent, tree: DecisionTree, measure: KOutOfN, p: Fraction,
                   influences: InfluenceVector, revealments: RevealmentVector,
                   constants: Optional[Iterable[float]] = None) -> OsssReport:
    """由已算好的 P(A), I, δ 组装报告 (search_constant 按事件缓存影响力)"""
    degenerate = p in (0, 1)
    lhs = p * (1 - p)
    weighted = sum((i * d for i, d in zip(influences.values, revealments.values)), Fraction(0))
    average = influences.total * revealments.average
    bracket = weighted + average
    ratio = _ratio(lhs, bracket)
    if bracket == 0 and lhs > 0:
        logger.error(f"{event.name} / {tree.name}: 括号为 0 而 lhs = {lhs}, 比值记为 ∞")
    return OsssReport(
        event=event.name,
        tree=tree.name,
        n=measure.n,
        k=measure.k,
        lhs=lhs,
        weighted_term=weighted,
        average_term=average,
        rhs_bracket=bracket,
        ratio=ratio,
        holds_at={constant_key(c): _holds(lhs, bracket, c) for c in _constants(constants)},
        mode="exact",
        degenerate=degenerate,
        p_event=p,
        influences=tuple(influences.values),
        revealments=tuple(revealments.values),
        average_revealment=revealments.average,
    )


# ==================== 蒙特卡洛引擎 ====================


def sample_pivotals(event: IncreasingEvent, measure: KOutOfN, samples: int, rng: SeedLike = None,
                    workers: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """
    Returns:
        (长度 samples 的 1_A 向量, 形状 (samples, n) 的 0-关键指示矩阵)
    """
    n = measure.n

    def work(size: int, stream: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        in_a = np.zeros(size, dtype=bool)
        piv = np.zeros((size, n), dtype=bool)
        for i, bits in enumerate(measure.iter_sample_bits(stream, size)):
            in_a[i] = event.contains_bits(bits)
            piv[i, list(event.zero_pivotals(bits))] = True
        return in_a, piv

    chunks = run_chunks(work, samples, rng, workers)
    return np.concatenate([c[0] for c in chunks]), np.concatenate([c[1] for c in chunks])


def orders_to_matrix(orders: Sequence[Sequence[int]], n: int) -> np.ndarray:
    revealed = np.zeros((len(orders), n), dtype=bool)
    for i, order in enumerate(orders):
        revealed[i, list(order)] = True
    return revealed


def report_from_samples(in_a: np.ndarray, pivotals: np.ndarray, revealed: np.ndarray, n: int, k: int,
                        constants: Optional[Iterable[float]] = None, lhs_exact: Optional[Fraction] = None,
                        event: str = "event", tree: str = "tree") -> OsssReport:
    """
    由样本矩阵组装蒙特卡洛报告

    Args:
        in_a: 影响力样本上的 1_A
        pivotals: 影响力样本上的 0-关键指示, 形状 (N1, n)
        revealed: 独立揭示样本上 "前 τ 步被查询" 的指示, 形状 (N2, n)
        lhs_exact: 已知 P(A)(1-P(A)) 时直接使用 (例如由对称性得到的 1/4)
    """
    in_a = np.asarray(in_a, dtype=bool)
    pivotals = np.asarray(pivotals, dtype=bool)
    revealed = np.asarray(revealed, dtype=bool)
    if pivotals.shape != (in_a.shape[0], n) or revealed.ndim != 2 or revealed.shape[1] != n:
        raise DimensionError(f"样本形状不一致: in_a {in_a.shape}, pivotals {pivotals.shape}, revealed {revealed.shape}")
    n1, n2 = pivotals.shape[0], revealed.shape[0]
    if n1 < 2 or n2 < 2:
        raise ParameterError("蒙特卡洛报告至少需要 2 个影响力样本和 2 个揭示样本")

    p = float(in_a.mean())
    if lhs_exact is None:
        lhs = p * (1 - p) * n1 / (n1 - 1)
        sigma2 = p * (1 - p)
        lhs_se = math.sqrt((1 - 2 * p) ** 2 * sigma2 / n1 + 2 * sigma2 ** 2 / n1 ** 2)
    else:
        lhs = float(lhs_exact)
        lhs_se = 0.0

    infl = pivotals.mean(axis=0)
    reveal = revealed.mean(axis=0)
    avg_reveal = float(reveal.mean())
    total_infl = float(infl.sum())
    weighted = float(infl @ reveal)
    average = total_infl * avg_reveal
    bracket = weighted + average

    # 括号对两组样本分别线性化
    g = pivotals.astype(float) @ (reveal + avg_reveal)
    h = revealed.astype(float) @ infl + total_infl * revealed.sum(axis=1) / n
    bracket_se = math.sqrt(g.var(ddof=1) / n1 + h.var(ddof=1) / n2)

    ratio = _ratio(lhs, bracket)
    if bracket > 0 and lhs > 0:
        ratio_se = ratio * math.hypot(lhs_se / lhs, bracket_se / bracket)
    else:
        ratio_se = math.inf if bracket == 0 and lhs > 0 else 0.0

    return OsssReport(
        event=event,
        tree=tree,
        n=n,
        k=k,
        lhs=lhs,
        weighted_term=weighted,
        average_term=average,
        rhs_bracket=bracket,
        ratio=ratio,
        holds_at={constant_key(c): _holds(lhs, bracket, c) for c in _constants(constants)},
        mode="monte-carlo",
        degenerate=p in (0.0, 1.0) and lhs_exact is None,
        p_event=p,
        influences=tuple(float(v) for v in infl),
        revealments=tuple(float(v) for v in reveal),
        average_revealment=avg_reveal,
        samples=n1 + n2,
        lhs_stderr=lhs_se,
        bracket_stderr=bracket_se,
        ratio_stderr=ratio_se,
    )


# ==================== 入口 ====================


def verify_osss(event: IncreasingEvent, tree: DecisionTree, measure: KOutOfN, engine: str = "exact",
                samples: Optional[int] = None, seed: SeedLike = None, workers: int = 1,
                constants: Optional[Iterable[float]] = None, tau_variant: TauLike = "standard",
                cap: Optional[int] = None) -> OsssReport:
    """
    计算 OSSS 不等式两侧

    Args:
        engine: "exact" 或 "mc"
        samples: 蒙特卡洛时影响力与揭示各用的样本数
        seed: 影响力流与揭示流分别取 derive_seed(seed, 0) 和 derive_seed(seed, 1)

    Raises:
        ResourceCapError: 精确引擎超过枚举上限
    """
    if not event.n == tree.n == measure.n:
        raise DimensionError(f"事件 n={event.n}, 树 n={tree.n}, 测度 n={measure.n} 不一致")

    if engine == "exact":
        p = probability_exact(event, measure, cap)
        influences = influences_exact(event, measure, cap)
        revealments = revealments_exact(tree, event, measure, tau_variant, cap)
        report = assemble_exact(event, tree, measure, p, influences, revealments, constants)
    elif engine in ("mc", "monte-carlo"):
        if not samples or samples < 2:
            raise ParameterError(f"蒙特卡洛引擎需要 samples >= 2, 收到 {samples}")
        in_a, piv = sample_pivotals(event, measure, samples, derive_seed(seed, 0), workers)
        orders = collect_revealed(tree, event, measure, samples, derive_seed(seed, 1), tau_variant, workers)
        report = report_from_samples(
            in_a, piv, orders_to_matrix(orders, measure.n), measure.n, measure.k,
            constants, event=event.name, tree=tree.name,
        )
    else:
        raise ParameterError(f"未知引擎 {engine!r}, 可选 exact / mc")

    logger.debug(
        f"{event.name} / {tree.name} (n={measure.n}, k={measure.k}, {report.mode}): "
        f"lhs={float(report.lhs):.6g}, bracket={float(report.rhs_bracket):.6g}, ratio={float(report.ratio):.6g}"
    )
    return report

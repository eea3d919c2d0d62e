"""渗流实验

- crossing_probability: P_{k,R^2}(A_R), 精确枚举或蒙特卡洛
- discrete_derivative: 经 Russo 类比由 E[N^0] 估计 R^2 (P_{k+1} - P_k)
- pivotal_scaling_experiment: E[N^0] 随 R 的增长与双对数拟合
- revealment_profile: 对锚点平均后的逐点揭示概率
- one_arm_estimate: 单臂概率, 伯努利与固定 k 两种测度
- osss_averaged_bound_check: 每个锚点上的 OSSS 报告及其平均
- russo_check: P_{k+1}(A) - P_k(A) = E_k[N_A^0] / (n-k) 的精确检查
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np
from loguru import logger

from ..measures.configuration import bits_to_mask
from ..measures.events import IncreasingEvent
from ..measures.influence import influences_exact, probability_exact
from ..measures.measure import KOutOfN
from ..osss.report import OsssReport, constant_key, report_from_samples, verify_osss
from ..utils.errors import ParameterError, ResourceCapError
from ..utils.parallel import SeedLike, batch_sizes, derive_seed, run_chunks
from ..utils.stats import Estimate, LineFit, difference, estimate_from_sums, fit_loglog
from .box import build_box
from .config import plugin_config
from .crossing import batch_crossings, batch_zero_pivotal, crossing_event, label_batch
from .exploration import explore, exploration_tree, minimal_tau


def _check_even(R: int):
    if R < 2 or R % 2:
        raise ParameterError(f"R 必须是不小于 2 的偶数, 收到 R={R}")


def _sample_grids(measure: KOutOfN, R: int, stream: np.random.Generator, size: int) -> np.ndarray:
    return measure.sample_masks(stream, size).reshape(size, R, R)


def _enumerate_grids(R: int, k: int, cap: Optional[int] = None) -> Iterator[np.ndarray]:
    """按批产出 Ω_{k,R^2} 的全部配置"""
    measure = KOutOfN(R * R, k)
    cap = plugin_config.percolation_exact_cap if cap is None else cap
    measure.check_cap(cap)
    batch: list[np.ndarray] = []
    for bits in measure.enumerate_bits(cap):
        batch.append(bits_to_mask(bits, measure.n).reshape(R, R))
        if len(batch) == plugin_config.percolation_batch_size:
            yield np.stack(batch)
            batch = []
    if batch:
        yield np.stack(batch)


# ==================== 穿越概率 ====================


def crossing_probability_exact(R: int, k: int, cap: Optional[int] = None) -> Fraction:
    measure = KOutOfN(R * R, k)
    hits = sum(int(batch_crossings(grids).sum()) for grids in _enumerate_grids(R, k, cap))
    return Fraction(hits, measure.size)


def crossing_probability_exact_curve(R: int, cap: Optional[int] = None) -> list[Fraction]:
    """k = 0..R^2 全部精确值"""
    n = R * R
    cap = plugin_config.percolation_exact_cap if cap is None else cap
    if 2 ** n > cap:
        raise ResourceCapError(f"2^{n} 超过枚举上限 {cap}")
    return [crossing_probability_exact(R, k, cap) for k in range(n + 1)]


def crossing_probability(R: int, k: int, engine: str = "exact", samples: Optional[int] = None,
                         seed: SeedLike = None, workers: int = 1, cap: Optional[int] = None):
    """
    Returns:
        精确引擎返回 Fraction, 蒙特卡洛返回 Estimate

    Raises:
        ResourceCapError: 精确枚举超过上限
    """
    if engine == "exact":
        return crossing_probability_exact(R, k, cap)
    if engine not in ("mc", "monte-carlo"):
        raise ParameterError(f"未知引擎 {engine!r}, 可选 exact / mc")
    measure = KOutOfN(R * R, k)
    samples = samples or plugin_config.percolation_samples

    def work(size: int, stream: np.random.Generator) -> int:
        hits = 0
        for batch in batch_sizes(size, plugin_config.percolation_batch_size):
            hits += int(batch_crossings(_sample_grids(measure, R, stream, batch)).sum())
        return hits

    hits = sum(run_chunks(work, samples, seed, workers))
    return estimate_from_sums(hits, hits, samples)


# ==================== 0-关键点与离散导数 ====================


def mean_zero_pivotal(R: int, k: int, samples: int, seed: SeedLike = None, workers: int = 1) -> Estimate:
    """E_{k,R^2}[N^0] 的蒙特卡洛估计"""
    measure = KOutOfN(R * R, k)

    def work(size: int, stream: np.random.Generator) -> tuple[int, int]:
        total = total_sq = 0
        for batch in batch_sizes(size, plugin_config.percolation_batch_size):
            _, pivotal = batch_zero_pivotal(_sample_grids(measure, R, stream, batch))
            counts = pivotal.sum(axis=(1, 2)).astype(np.int64)
            total += int(counts.sum())
            total_sq += int((counts ** 2).sum())
        return total, total_sq

    chunks = run_chunks(work, samples, seed, workers)
    return estimate_from_sums(sum(c[0] for c in chunks), sum(c[1] for c in chunks), samples)


def mean_zero_pivotal_exact(R: int, k: int, cap: Optional[int] = None) -> Fraction:
    total = 0
    for grids in _enumerate_grids(R, k, cap):
        _, pivotal = batch_zero_pivotal(grids)
        total += int(pivotal.sum())
    return Fraction(total, KOutOfN(R * R, k).size)


@dataclass(frozen=True)
class DerivativeEstimate:
    R: int
    k: int
    mean_pivotals: Estimate
    derivative: Estimate


def discrete_derivative(R: int, samples: int, seed: SeedLike = None, workers: int = 1) -> DerivativeEstimate:
    """R^2 (P_{k+1} - P_k) = R^2 / (R^2 - k) · E_k[N^0], k = R^2/2 时系数为 2"""
    _check_even(R)
    n = R * R
    k = n // 2
    mean = mean_zero_pivotal(R, k, samples, seed, workers)
    return DerivativeEstimate(R, k, mean, mean.scaled(n / (n - k)))


def discrete_derivative_direct(R: int, samples: int, seed: SeedLike = None, workers: int = 1) -> Estimate:
    """两个独立的穿越概率估计之差乘以 R^2"""
    _check_even(R)
    n = R * R
    k = n // 2
    low = crossing_probability(R, k, "mc", samples, derive_seed(seed, 0), workers)
    high = crossing_probability(R, k + 1, "mc", samples, derive_seed(seed, 1), workers)
    return difference(high, low).scaled(n)


@dataclass(frozen=True)
class DerivativeExact:
    R: int
    k: int
    direct: Fraction
    via_pivotals: Fraction

    @property
    def holds(self) -> bool:
        return self.direct == self.via_pivotals


def discrete_derivative_exact(R: int, cap: Optional[int] = None) -> DerivativeExact:
    _check_even(R)
    n = R * R
    k = n // 2
    direct = n * (crossing_probability_exact(R, k + 1, cap) - crossing_probability_exact(R, k, cap))
    via = Fraction(n, n - k) * mean_zero_pivotal_exact(R, k, cap)
    return DerivativeExact(R, k, direct, via)


# ==================== 标度实验 ====================


@dataclass(frozen=True)
class ScalingRow:
    R: int
    k: int
    estimate: Estimate
    samples: int


@dataclass(frozen=True)
class ScalingResult:
    rows: tuple[ScalingRow, ...]
    fit: Optional[LineFit]
    separations: tuple[tuple[int, int, float], ...]

    @property
    def increasing(self) -> bool:
        means = [row.estimate.mean for row in self.rows]
        return all(a < b for a, b in zip(means, means[1:]))

    def separated(self, sigmas: float = 3.0) -> bool:
        return all(z > sigmas for _, _, z in self.separations)


def pivotal_scaling_experiment(R_list: Sequence[int], samples: int, seed: SeedLike = None,
                               workers: int = 1) -> ScalingResult:
    """
    每个 R 用 derive_seed(seed, R) 作为独立种子, 结果与 R 列表的顺序无关

    Returns:
        各 R 的 E[N^0] 估计, log E[N^0] 对 log R 的最小二乘拟合 (至少两个 R 时), 相邻 R 之间的 z 值
    """
    sizes = sorted(set(R_list))
    for R in sizes:
        _check_even(R)
    rows = []
    for R in sizes:
        est = mean_zero_pivotal(R, R * R // 2, samples, derive_seed(seed, R), workers)
        logger.info(f"R={R}: E[N^0] ≈ {est.mean:.4f} ± {est.stderr:.4f}")
        rows.append(ScalingRow(R, R * R // 2, est, samples))
    fit = None
    if len(rows) >= 2:
        fit = fit_loglog([row.R for row in rows], [row.estimate.mean for row in rows])
        logger.info(f"拟合斜率 α = {fit.slope:.4f}, 95% 区间 [{fit.ci_low:.4f}, {fit.ci_high:.4f}]")
    separations = []
    for a, b in zip(rows, rows[1:]):
        diff = difference(b.estimate, a.estimate)
        separations.append((a.R, b.R, diff.z_score(0.0)))
    return ScalingResult(tuple(rows), fit, tuple(separations))


# ==================== 揭示概率 ====================


@dataclass(frozen=True)
class RevealmentProfile:
    R: int
    samples: int
    anchors: tuple[int, ...]
    averaged: np.ndarray = field(repr=False)
    per_anchor: np.ndarray = field(repr=False)
    anchor_samples: tuple[int, ...] = ()

    @property
    def max_averaged(self) -> float:
        return float(self.averaged.max())

    def argmax(self) -> tuple[int, int]:
        """揭示概率最大的顶点 (x, y)"""
        y, x = np.unravel_index(int(self.averaged.argmax()), self.averaged.shape)
        return int(x), int(y)


def revealment_profile(R: int, samples: int, seed: SeedLike = None, workers: int = 1,
                       anchors: Optional[Sequence[int]] = None) -> RevealmentProfile:
    """
    每个样本独立抽 ω 与均匀锚点 y0, 记录 T_{v0} 两条行走查看过的顶点.
    总频率估计 (1/|锚点|) Σ_{v0} P(H 在 T_{v0} 下被查看), 按锚点分组得到逐锚点的估计
    """
    _check_even(R)
    box = build_box(R)
    anchors = tuple(range(R)) if anchors is None else tuple(anchors)
    measure = KOutOfN(box.n, box.n // 2)

    def work(size: int, stream: np.random.Generator):
        counts = np.zeros((len(anchors), box.n), dtype=np.int64)
        per = np.zeros(len(anchors), dtype=np.int64)
        for batch in batch_sizes(size, plugin_config.percolation_batch_size):
            grids = _sample_grids(measure, R, stream, batch)
            picks = stream.integers(len(anchors), size=batch)
            for grid, a in zip(grids, picks):
                examined = explore(box, grid, anchors[a]).examined
                counts[a, list(examined)] += 1
                per[a] += 1
        return counts, per

    chunks = run_chunks(work, samples, seed, workers)
    counts = np.sum([c[0] for c in chunks], axis=0)
    per = np.sum([c[1] for c in chunks], axis=0)
    averaged = (counts.sum(axis=0) / samples).reshape(R, R)
    per_anchor = (counts / np.maximum(per, 1)[:, None]).reshape(len(anchors), R, R)
    return RevealmentProfile(R, samples, anchors, averaged, per_anchor, tuple(int(c) for c in per))


# ==================== 单臂概率 ====================


def _one_arm_geometry(M: int) -> tuple[int, np.ndarray]:
    """边长 2M+1 的盒子, 原点在 (M, M); 返回 (边长, 图距离 >= M 的掩码)"""
    if M < 1:
        raise ParameterError(f"M 必须为正, 收到 M={M}")
    L = 2 * M + 1
    d = np.arange(-M, M + 1)
    dx = d[None, :]
    dy = d[:, None]
    dist = (np.abs(dx) + np.abs(dy) + np.abs(dx + dy)) // 2
    return L, dist >= M


def one_arm_events(grids: np.ndarray, M: int) -> np.ndarray:
    """原点被占据且原点所在占据分支到达图距离 M"""
    L, far = _one_arm_geometry(M)
    labels = label_batch(grids)
    origin = labels[:, M, M]
    hits = (labels == origin[:, None, None]) & far[None] & (origin > 0)[:, None, None]
    return hits.any(axis=(1, 2))


@dataclass(frozen=True)
class OneArmResult:
    M: int
    n: int
    k: int
    bernoulli: Estimate
    fixed_k: Estimate

    def holds(self, sigmas: float = 4.0) -> bool:
        """固定 k 的估计不超过伯努利估计的两倍 (允许 sigmas 倍误差)"""
        gap = self.fixed_k.mean - 2 * self.bernoulli.mean
        se = float(np.hypot(self.fixed_k.stderr, 2 * self.bernoulli.stderr))
        return gap <= sigmas * se + 1e-12


def one_arm_estimate(M: int, samples: int, seed: SeedLike = None, workers: int = 1) -> OneArmResult:
    """伯努利(1/2) 与 P_{n//2, n} 两种测度下的单臂概率, 两条独立随机流"""
    L, _ = _one_arm_geometry(M)
    n = L * L
    measure = KOutOfN(n, n // 2)

    def work_for(bernoulli: bool):
        def work(size: int, stream: np.random.Generator) -> int:
            hits = 0
            for batch in batch_sizes(size, plugin_config.percolation_batch_size):
                if bernoulli:
                    grids = stream.random((batch, L, L)) < 0.5
                else:
                    grids = _sample_grids(measure, L, stream, batch)
                hits += int(one_arm_events(grids, M).sum())
            return hits
        return work

    b = sum(run_chunks(work_for(True), samples, derive_seed(seed, 0), workers))
    f = sum(run_chunks(work_for(False), samples, derive_seed(seed, 1), workers))
    return OneArmResult(M, n, n // 2, estimate_from_sums(b, b, samples), estimate_from_sums(f, f, samples))


def one_arm_exact(M: int) -> tuple[Fraction, Fraction]:
    """
    枚举盒内全部配置

    Returns:
        (伯努利(1/2) 下的概率, P_{n//2, n} 下的概率)
    """
    L, _ = _one_arm_geometry(M)
    n = L * L
    if n > plugin_config.percolation_one_arm_exact_max_sites:
        raise ResourceCapError(f"(2M+1)^2 = {n} 超过精确枚举上限 {plugin_config.percolation_one_arm_exact_max_sites}")
    codes = np.arange(2 ** n, dtype=np.int64)
    masks = ((codes[:, None] >> np.arange(n)) & 1).astype(bool)
    events = one_arm_events(masks.reshape(-1, L, L), M)
    weights = masks.sum(axis=1)
    k = n // 2
    fixed = events[weights == k]
    return Fraction(int(events.sum()), 2 ** n), Fraction(int(fixed.sum()), int(fixed.size))


# ==================== 平均后的 OSSS 界 ====================


@dataclass(frozen=True)
class AveragedBoundReport:
    R: int
    mode: str
    reports: tuple[OsssReport, ...]
    averaged_bracket: float
    averaged_ratio: float
    holds_at: dict[str, bool]


def _revealed_prefixes(R: int, y0: int, samples: int, seed: SeedLike, workers: int) -> np.ndarray:
    """按 T_{v0} 的 τ 截断后的揭示指示矩阵"""
    box = build_box(R)
    measure = KOutOfN(box.n, box.n // 2)

    def work(size: int, stream: np.random.Generator) -> np.ndarray:
        out = np.zeros((size, box.n), dtype=bool)
        row = 0
        for batch in batch_sizes(size, plugin_config.percolation_batch_size):
            for grid in _sample_grids(measure, R, stream, batch):
                examined = explore(box, grid, y0).examined
                tau = minimal_tau(box, grid, examined)
                out[row, list(examined[:tau])] = True
                row += 1
        return out

    return np.concatenate(run_chunks(work, samples, seed, workers))


def osss_averaged_bound_check(R: int, samples: Optional[int] = None, seed: SeedLike = None, workers: int = 1,
                              constants: Optional[Iterable[float]] = None,
                              anchors: Optional[Sequence[int]] = None) -> AveragedBoundReport:
    """
    R = 2 时用通用精确引擎; 否则影响力样本在锚点之间共享, 揭示样本按锚点各用一条独立流,
    lhs 取对称性给出的 1/4
    """
    _check_even(R)
    constants = list(constants) if constants is not None else [20.0]
    box = build_box(R)
    n, k = box.n, box.n // 2
    anchors = tuple(range(R)) if anchors is None else tuple(anchors)
    event = crossing_event(box)

    if R == 2:
        measure = KOutOfN(n, k)
        reports = tuple(
            verify_osss(event, exploration_tree(box, y0).tree, measure, "exact", constants=constants)
            for y0 in anchors
        )
        mode = "exact"
    else:
        samples = samples or plugin_config.percolation_samples
        measure = KOutOfN(n, k)

        def work(size: int, stream: np.random.Generator):
            parts_a, parts_p = [], []
            for batch in batch_sizes(size, plugin_config.percolation_batch_size):
                crossing, pivotal = batch_zero_pivotal(_sample_grids(measure, R, stream, batch))
                parts_a.append(crossing)
                parts_p.append(pivotal.reshape(batch, n))
            return np.concatenate(parts_a), np.concatenate(parts_p)

        chunks = run_chunks(work, samples, derive_seed(seed, 0), workers)
        in_a = np.concatenate([c[0] for c in chunks])
        piv = np.concatenate([c[1] for c in chunks])
        reports = tuple(
            report_from_samples(
                in_a, piv, _revealed_prefixes(R, y0, samples, derive_seed(seed, 1, y0), workers),
                n, k, constants, lhs_exact=Fraction(1, 4), event=event.name, tree=f"exploration_R{R}_y{y0}",
            )
            for y0 in anchors
        )
        mode = "monte-carlo"

    averaged_bracket = float(np.mean([float(r.rhs_bracket) for r in reports]))
    lhs = float(reports[0].lhs)
    averaged_ratio = lhs / averaged_bracket if averaged_bracket > 0 else float("inf")
    holds_at = {constant_key(c): all(r.holds_within_error(c) for r in reports) for c in constants}
    for r in reports:
        logger.debug(f"{r.tree}: ratio = {float(r.ratio):.4f}")
    return AveragedBoundReport(R, mode, reports, averaged_bracket, averaged_ratio, holds_at)


# ==================== Russo 类比 ====================


@dataclass(frozen=True)
class RussoReport:
    event: str
    n: int
    k: int
    lhs: Fraction
    expected_pivotals: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def russo_check(event: IncreasingEvent, n: int, k: int, cap: Optional[int] = None) -> RussoReport:
    """
    Raises:
        ParameterError: k = n 时左侧无定义
        ResourceCapError: n 超过精确检查上限
    """
    if event.n != n:
        raise ParameterError(f"事件 {event.name} 定义在 n={event.n} 上, 与 n={n} 不一致")
    if not 0 <= k < n:
        raise ParameterError(f"要求 0 <= k < n, 收到 n={n}, k={k}")
    if n > plugin_config.percolation_russo_max_n:
        raise ResourceCapError(f"n={n} 超过 Russo 精确检查上限 {plugin_config.percolation_russo_max_n}")
    low, high = KOutOfN(n, k), KOutOfN(n, k + 1)
    lhs = probability_exact(event, high, cap) - probability_exact(event, low, cap)
    expected = influences_exact(event, low, cap).total
    report = RussoReport(event.name, n, k, lhs, expected, expected / (n - k))
    if not report.holds:
        logger.error(f"Russo 恒等式不成立: {event.name}, n={n}, k={k}, {lhs} != {report.rhs}")
    return report

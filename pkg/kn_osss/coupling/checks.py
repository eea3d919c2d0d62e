"""耦合的精确检查

对所有 (X, Y, σ) 按权重 1/binom(n,k)^2 * 1/(d/2)! 求和:
- check_z_marginal: Z^(n) 的边缘分布恰为 P_{k,n}, 且与 1_A(X) 独立
- check_term_identity: 2P(A)(1-P(A)) = P(X 与 Z^(n) 恰有一个在 A 中), 并按 d(X,Y) < c1 n 拆成 TERM(1) + TERM(2)
- check_claim_distributional_equality: 给定 X 在 e_[t] 上的取值, 匹配对集合与单点取值, Z^(t) 与 Y 的条件分布相同
- search_negative_correlation: 检查 !(X,Y,A) 与 d(X,Y) < c1 n 是否负相关
- term_identity_mc: 分解恒等式的蒙特卡洛版本 (配对差分估计)
"""

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Iterator, Optional, Sequence

import numpy as np
from loguru import logger

from ..measures.configuration import Configuration, bits_to_mask, masks_to_bits
from ..measures.events import IncreasingEvent
from ..measures.influence import influences_exact, probability_exact
from ..measures.measure import KOutOfN, disagreement_distribution
from ..trees.revealment import revealments_exact
from ..trees.tau import Determiner, TauLike, as_variant, run_bits
from ..trees.tree import DecisionTree
from ..utils.errors import DimensionError, ResourceCapError
from ..utils.parallel import SeedLike, map_tasks, run_chunks
from ..utils.stats import Estimate, estimate_from_sums
from .config import plugin_config
from .matching import _bits_positions
from .zsequence import final_state_bits


def default_c1() -> Fraction:
    return Fraction(plugin_config.coupling_c1_numerator, plugin_config.coupling_c1_denominator)


def _guard(event: IncreasingEvent, tree: DecisionTree, n: int, k: int) -> KOutOfN:
    if not event.n == tree.n == n:
        raise DimensionError(f"事件 n={event.n}, 树 n={tree.n} 与 n={n} 不一致")
    if n > plugin_config.coupling_exact_max_n:
        raise ResourceCapError(f"按匹配求和的精确检查要求 n <= {plugin_config.coupling_exact_max_n}, 收到 n={n}")
    return KOutOfN(n, k)


def _transcripts(event: IncreasingEvent, tree: DecisionTree, measure: KOutOfN,
                 tau_variant: TauLike) -> dict[int, tuple[tuple[int, ...], bool]]:
    """每个 X 的前 τ 步查询顺序与 1_A(X)"""
    variant = as_variant(tau_variant)
    determiner = Determiner(event, variant, measure.k)
    out = {}
    for x in measure.enumerate_bits():
        tr = run_bits(tree, determiner, x, variant)
        out[x] = (tr.order, tr.decision)
    return out


def _matchings(n: int, x: int, y: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """产出 (σ, (d/2)!)"""
    left = _bits_positions(x & ~y)
    right = _bits_positions(y & ~x)
    count = factorial(len(left))
    for perm in permutations(right):
        pairing = list(range(n))
        for g, h in zip(left, perm):
            pairing[g] = h
            pairing[h] = g
        yield tuple(pairing), count


def _label(bits: int, n: int) -> str:
    return Configuration(n, bits).to_string()


# ==================== Z^(n) 的边缘分布 ====================


@dataclass(frozen=True)
class ZMarginalReport:
    n: int
    k: int
    event: str
    tree: str
    p_event: Fraction
    marginal: dict[str, Fraction]
    joint: dict[str, Fraction]
    total: Fraction
    marginal_uniform: bool
    independent: bool

    @property
    def holds(self) -> bool:
        return self.total == 1 and self.marginal_uniform and self.independent


def check_z_marginal(event: IncreasingEvent, tree: DecisionTree, n: int, k: int,
                     tau_variant: TauLike = "standard", workers: int = 1) -> ZMarginalReport:
    measure = _guard(event, tree, n, k)
    transcripts = _transcripts(event, tree, measure, tau_variant)
    xs = list(transcripts)
    norm = measure.size * measure.size

    def per_x(x: int) -> dict[tuple[bool, int], Fraction]:
        order, in_a = transcripts[x]
        part: dict[tuple[bool, int], Fraction] = defaultdict(Fraction)
        for y in xs:
            for pairing, count in _matchings(n, x, y):
                z = final_state_bits(x, y, pairing, order)
                part[(in_a, z)] += Fraction(1, norm * count)
        return part

    joint: dict[tuple[bool, int], Fraction] = defaultdict(Fraction)
    for part in map_tasks(per_x, xs, workers):
        for key, w in part.items():
            joint[key] += w

    uniform = Fraction(1, measure.size)
    p_event = Fraction(sum(1 for x in xs if transcripts[x][1]), measure.size)
    marginal = {z: joint.get((False, z), Fraction(0)) + joint.get((True, z), Fraction(0)) for z in xs}
    marginal_uniform = all(m == uniform for m in marginal.values()) and set(z for _, z in joint) <= set(xs)
    independent = all(
        joint.get((a, z), Fraction(0)) == (p_event if a else 1 - p_event) * uniform
        for a in (False, True)
        for z in xs
    )
    report = ZMarginalReport(
        n=n, k=k, event=event.name, tree=tree.name,
        p_event=p_event,
        marginal={_label(z, n): m for z, m in marginal.items()},
        joint={f"{int(a)}|{_label(z, n)}": w for (a, z), w in sorted(joint.items())},
        total=sum(joint.values(), Fraction(0)),
        marginal_uniform=marginal_uniform,
        independent=independent,
    )
    if not report.holds:
        logger.error(f"Z^(n) 边缘分布检查失败: {event.name} / {tree.name}, n={n}, k={k}")
    return report


# ==================== 分解恒等式 ====================


@dataclass(frozen=True)
class TermIdentityReport:
    n: int
    k: int
    event: str
    tree: str
    c1: Fraction
    p_event: Fraction
    lhs: Fraction
    exactly_one: Fraction
    term1: Fraction
    term2: Fraction
    term1_via_y: Fraction
    term1_bound: Fraction
    bracket: Fraction
    term2_bound: Fraction

    @property
    def identity_holds(self) -> bool:
        return self.lhs == self.exactly_one

    @property
    def term1_matches(self) -> bool:
        """TERM(1) 中把 Z^(τ) 换成 Y 后数值不变"""
        return self.term1 == self.term1_via_y

    @property
    def term1_within_bound(self) -> bool:
        return self.term1 <= self.term1_bound

    @property
    def term2_within_bound(self) -> bool:
        return self.term2 <= self.term2_bound

    @property
    def holds(self) -> bool:
        return self.identity_holds and self.term1_matches and self.term1_within_bound


def check_term_identity(event: IncreasingEvent, tree: DecisionTree, n: int, k: int,
                        c1: Optional[Fraction] = None, tau_variant: TauLike = "standard",
                        workers: int = 1) -> TermIdentityReport:
    """
    TERM(1) = P(!(X, Z^(n), A), d < c1 n), TERM(2) 为其余部分

    同时报告两个上界:
    TERM(1) <= 4 P(A)(1-P(A)) P(d < c1 n), TERM(2) <= (2/c1) (Σ I(e)δ_e + Σ I(e)δ̄)
    """
    c1 = default_c1() if c1 is None else Fraction(c1)
    measure = _guard(event, tree, n, k)
    transcripts = _transcripts(event, tree, measure, tau_variant)
    xs = list(transcripts)
    norm = measure.size * measure.size
    cutoff = c1 * n

    def per_x(x: int) -> tuple[Fraction, Fraction, Fraction]:
        order, in_a = transcripts[x]
        exactly_one = term1 = term1_y = Fraction(0)
        for y in xs:
            close = ((x ^ y).bit_count()) < cutoff
            if close and transcripts[y][1] != in_a:
                term1_y += Fraction(1, norm)
            for pairing, count in _matchings(n, x, y):
                z = final_state_bits(x, y, pairing, order)
                if event.contains_bits(z) != in_a:
                    w = Fraction(1, norm * count)
                    exactly_one += w
                    if close:
                        term1 += w
        return exactly_one, term1, term1_y

    exactly_one = term1 = term1_y = Fraction(0)
    for a, b, c in map_tasks(per_x, xs, workers):
        exactly_one += a
        term1 += b
        term1_y += c

    p = Fraction(sum(1 for x in xs if transcripts[x][1]), measure.size)
    lhs = 2 * p * (1 - p)
    law = disagreement_distribution(n, k)
    influences = influences_exact(event, measure)
    revealments = revealments_exact(tree, event, measure, tau_variant)
    weighted = sum((i * d for i, d in zip(influences.values, revealments.values)), Fraction(0))
    bracket = weighted + influences.total * revealments.average
    report = TermIdentityReport(
        n=n, k=k, event=event.name, tree=tree.name, c1=c1,
        p_event=p,
        lhs=lhs,
        exactly_one=exactly_one,
        term1=term1,
        term2=exactly_one - term1,
        term1_via_y=term1_y,
        term1_bound=4 * p * (1 - p) * law.prob_below(cutoff),
        bracket=bracket,
        term2_bound=2 / c1 * bracket,
    )
    if not report.holds:
        logger.error(
            f"分解恒等式检查失败: {event.name} / {tree.name}, n={n}, k={k}, "
            f"lhs={lhs}, P(!)={exactly_one}, TERM(1)={term1}, 换成 Y 后={term1_y}"
        )
    return report


# ==================== 条件分布相等 ====================


@dataclass(frozen=True)
class ClaimReport:
    n: int
    k: int
    t: int
    event: str
    tree: str
    cells: int
    mismatches: tuple[str, ...] = field(default_factory=tuple)

    @property
    def holds(self) -> bool:
        return not self.mismatches


def check_claim_distributional_equality(event: IncreasingEvent, tree: DecisionTree, n: int, k: int, t: int,
                                        tau_variant: TauLike = "standard") -> ClaimReport:
    """
    条件信息: e_[t] 及 X 在其上的取值 (要求 t <= τ), 匹配对集合, e_[t] 之外单点的 X 取值.
    在每个可达单元上比较 Z^(t) 与 Y 的 (未归一化) 分布
    """
    measure = _guard(event, tree, n, k)
    if not 1 <= t <= n:
        raise DimensionError(f"t 必须在 1..{n} 内, 收到 {t}")
    variant = as_variant(tau_variant)
    determiner = Determiner(event, variant, k)
    xs = list(measure.enumerate_bits())
    norm = measure.size * measure.size
    law_z: dict[tuple, dict[int, Fraction]] = defaultdict(lambda: defaultdict(Fraction))
    law_y: dict[tuple, dict[int, Fraction]] = defaultdict(lambda: defaultdict(Fraction))

    for x in xs:
        order = run_bits(tree, determiner, x, variant).order
        if len(order) < t:
            continue
        prefix = order[:t]
        values = tuple((x >> e) & 1 for e in prefix)
        for y in xs:
            for pairing, count in _matchings(n, x, y):
                pairs = frozenset(frozenset((e, f)) for e, f in enumerate(pairing) if e < f)
                singles = tuple((s, (x >> s) & 1) for s in range(n) if pairing[s] == s and s not in prefix)
                key = (prefix, values, pairs, singles)
                z = final_state_bits(x, y, pairing, prefix)
                w = Fraction(1, norm * count)
                law_z[key][z] += w
                law_y[key][y] += w

    mismatches = []
    for key in law_z:
        if dict(law_z[key]) != dict(law_y[key]):
            if len(mismatches) < plugin_config.coupling_report_mismatches:
                mismatches.append(f"e_[t]={list(key[0])}, X={list(key[1])}, pairs={sorted(map(sorted, key[2]))}")
            else:
                break
    report = ClaimReport(n, k, t, event.name, tree.name, len(law_z), tuple(mismatches))
    if not report.holds:
        logger.error(f"条件分布检查失败: {event.name} / {tree.name}, t={t}: {mismatches}")
    return report


# ==================== 负相关搜索 ====================


@dataclass(frozen=True)
class CorrelationRow:
    event: str
    n: int
    k: int
    c1: Fraction
    joint: Fraction
    p_exactly_one: Fraction
    p_close: Fraction

    @property
    def product(self) -> Fraction:
        return self.p_exactly_one * self.p_close

    @property
    def positively_correlated(self) -> bool:
        """joint > product 时两个事件不是负相关"""
        return self.joint > self.product


def search_negative_correlation(events: Sequence[IncreasingEvent], measure: KOutOfN,
                                c1: Optional[Fraction] = None) -> list[CorrelationRow]:
    """
    对每个事件精确计算 P(!(X,Y,A), d < c1 n) 与 P(!(X,Y,A)) P(d < c1 n)

    Returns:
        每个事件一行; positively_correlated 为真的行即负相关不成立的例子
    """
    c1 = default_c1() if c1 is None else Fraction(c1)
    measure.check_cap()
    n, k = measure.n, measure.k
    xs = list(measure.enumerate_bits())
    masks = np.array([bits_to_mask(x, n) for x in xs], dtype=np.int64)
    overlap = masks @ masks.T
    dist = 2 * (k - overlap)
    cutoff = c1 * n
    close = dist * cutoff.denominator < cutoff.numerator
    norm = len(xs) * len(xs)
    p_close = Fraction(int(close.sum()), norm)
    rows = []
    for event in events:
        if event.n != n:
            raise DimensionError(f"事件 {event.name} 定义在 n={event.n} 上, 与 n={n} 不一致")
        inside = np.array([event.contains_bits(x) for x in xs], dtype=bool)
        differ = inside[:, None] != inside[None, :]
        rows.append(CorrelationRow(
            event=event.name, n=n, k=k, c1=c1,
            joint=Fraction(int((differ & close).sum()), norm),
            p_exactly_one=Fraction(int(differ.sum()), norm),
            p_close=p_close,
        ))
    found = [row.event for row in rows if row.positively_correlated]
    if found:
        logger.info(f"负相关不成立的事件 (n={n}, k={k}, c1={c1}): {found}")
    return rows


# ==================== 蒙特卡洛版本 ====================


@dataclass(frozen=True)
class TermIdentityEstimate:
    n: int
    k: int
    event: str
    tree: str
    exactly_one: Estimate
    independent_pair: Estimate
    difference: Estimate
    lhs_exact: Optional[Fraction] = None

    def holds(self, sigmas: float = 4.0) -> bool:
        ok = self.difference.within(0.0, sigmas)
        if self.lhs_exact is not None:
            ok = ok and self.exactly_one.within(float(self.lhs_exact), sigmas)
        return ok


def term_identity_mc(event: IncreasingEvent, tree: DecisionTree, measure: KOutOfN, samples: int,
                     rng: SeedLike = None, tau_variant: TauLike = "standard", workers: int = 1,
                     exact_lhs: bool = True) -> TermIdentityEstimate:
    """
    每个样本独立抽 X, Y 与均匀匹配 σ, 比较 [A(X) != A(Z^(n))] 与 [A(X) != A(Y)].
    后者的期望恰为 2P(A)(1-P(A)), 两者之差的均值应为 0
    """
    if not event.n == tree.n == measure.n:
        raise DimensionError(f"事件 n={event.n}, 树 n={tree.n}, 测度 n={measure.n} 不一致")
    variant = as_variant(tau_variant)
    n = measure.n

    def work(size: int, stream: np.random.Generator) -> tuple[int, int, int, int]:
        determiner = Determiner(event, variant, measure.k)
        hits_z = hits_y = diff_sum = diff_sq = 0
        remaining = size
        while remaining > 0:
            batch = min(remaining, 2048)
            xs = masks_to_bits(measure.sample_masks(stream, batch))
            ys = masks_to_bits(measure.sample_masks(stream, batch))
            for x, y in zip(xs, ys):
                left = _bits_positions(x & ~y)
                right = _bits_positions(y & ~x)
                if right:
                    right = [right[i] for i in stream.permutation(len(right))]
                pairing = list(range(n))
                for g, h in zip(left, right):
                    pairing[g] = h
                    pairing[h] = g
                tr = run_bits(tree, determiner, x, variant)
                z = final_state_bits(x, y, pairing, tr.order)
                a = int(event.contains_bits(z) != tr.decision)
                b = int(event.contains_bits(y) != tr.decision)
                hits_z += a
                hits_y += b
                diff_sum += a - b
                diff_sq += (a - b) ** 2
            remaining -= batch
        return hits_z, hits_y, diff_sum, diff_sq

    totals = [sum(part) for part in zip(*run_chunks(work, samples, rng, workers))]
    hits_z, hits_y, diff_sum, diff_sq = totals
    lhs = None
    if exact_lhs:
        try:
            p = probability_exact(event, measure)
            lhs = 2 * p * (1 - p)
        except ResourceCapError:
            logger.warning(f"binom({n},{measure.k}) 超过枚举上限, 不计算精确的 2P(A)(1-P(A))")
    return TermIdentityEstimate(
        n=n, k=measure.k, event=event.name, tree=tree.name,
        exactly_one=estimate_from_sums(hits_z, hits_z, samples),
        independent_pair=estimate_from_sums(hits_y, hits_y, samples),
        difference=estimate_from_sums(diff_sum, diff_sq, samples),
        lhs_exact=lhs,
    )

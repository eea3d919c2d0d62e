"""Z 序列

Z^(0) = X; 0 < j <= τ 时把 e_j 与 σ(e_j) 两个坐标改成 Y 的取值; j > τ 时不再变化.
每一步交换的是一对取值相反的点 (或单点), 所以每个 Z^(j) 都恰有 k 个 1.
"""

from dataclasses import dataclass
from typing import Sequence

from ..measures.configuration import Configuration
from ..measures.events import IncreasingEvent
from ..trees.tau import TauLike, Transcript, run_tree
from ..trees.tree import DecisionTree
from ..utils.errors import DimensionError, MatchingError
from .matching import Matching


@dataclass(frozen=True)
class ZSequence:
    states: tuple[Configuration, ...]
    x: Configuration
    y: Configuration
    matching: Matching
    transcript: Transcript

    @property
    def tau(self) -> int:
        return self.transcript.tau

    @property
    def final(self) -> Configuration:
        return self.states[-1]


def z_states_bits(n: int, x: int, y: int, pairing: Sequence[int], order: Sequence[int]) -> list[int]:
    """按前 τ 个查询元素 order 计算 Z^(0..n) 的打包整数"""
    states = [x]
    z = x
    for j in range(1, n + 1):
        if j <= len(order):
            e = order[j - 1]
            mask = (1 << e) | (1 << pairing[e])
            z = (z & ~mask) | (y & mask)
        states.append(z)
    return states


def final_state_bits(x: int, y: int, pairing: Sequence[int], order: Sequence[int]) -> int:
    """Z^(n) = Z^(τ)"""
    z = x
    for e in order:
        mask = (1 << e) | (1 << pairing[e])
        z = (z & ~mask) | (y & mask)
    return z


def build_z_sequence(x: Configuration, y: Configuration, matching: Matching, tree: DecisionTree,
                     event: IncreasingEvent, tau_variant: TauLike = "standard") -> ZSequence:
    """
    Raises:
        MatchingError: σ 对 (X, Y) 不合法
    """
    if not x.n == y.n == tree.n == matching.n:
        raise DimensionError(f"X ({x.n}), Y ({y.n}), σ ({matching.n}) 与树 ({tree.n}) 的长度不一致")
    if x.ones != y.ones:
        raise MatchingError(f"|X| = {x.ones} 与 |Y| = {y.ones} 不同")
    matching.validate(x, y)
    transcript = run_tree(tree, event, x, tau_variant)
    bits = z_states_bits(x.n, x.bits, y.bits, matching.pairing, transcript.order)
    states = tuple(Configuration(x.n, b) for b in bits)
    return ZSequence(states, x, y, matching, transcript)


def observation_holds(seq: ZSequence) -> bool:
    """
    逐坐标核对:
    - j <= τ 时 Z^(j) 在 e_[j] ∪ σ(e_[j]) 上等于 Y, 其余位置等于 X
    - j > τ 时 Z^(j) = Z^(τ)
    - 每个 Z^(j) 的权重都等于 |X|
    """
    n = seq.x.n
    full = (1 << n) - 1
    order = seq.transcript.order
    touched = 0
    for j, state in enumerate(seq.states):
        if state.ones != seq.x.ones:
            return False
        if j > seq.tau:
            if state.bits != seq.states[seq.tau].bits:
                return False
            continue
        if j >= 1:
            e = order[j - 1]
            touched |= (1 << e) | (1 << seq.matching(e))
        expected = (seq.y.bits & touched) | (seq.x.bits & full & ~touched)
        if state.bits != expected:
            return False
    return True

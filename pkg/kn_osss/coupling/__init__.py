"""耦合模块

功能:
- 不一致点, 匹配 σ 的枚举与均匀抽样
- Z 序列: 沿决策树逐对把 X 换成 Y
- 精确检查: Z^(n) 的边缘分布, 分解恒等式与两项上界, 条件分布相等
- 负相关反例搜索, 分解恒等式的蒙特卡洛版本
"""

from .checks import (
    ClaimReport,
    CorrelationRow,
    TermIdentityEstimate,
    TermIdentityReport,
    ZMarginalReport,
    check_claim_distributional_equality,
    check_term_identity,
    check_z_marginal,
    default_c1,
    search_negative_correlation,
    term_identity_mc,
)
from .matching import (
    Matching,
    disagreement_points,
    distance,
    enumerate_matchings,
    matching_count,
    matching_from_lists,
    uniform_matching,
)
from .zsequence import ZSequence, build_z_sequence, final_state_bits, observation_holds, z_states_bits

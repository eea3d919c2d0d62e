"""测度模块

功能:
- Configuration: 按位打包的 0/1 配置, flip / swap
- KOutOfN: P_{k,n} 的精确质量, 抽样与字典序枚举
- IncreasingEvent 及其生成器, 单调性检查
- 关键点判定, 精确与蒙特卡洛影响力
- disagreement_distribution: 两个独立样本不一致点数的精确分布
"""

from .configuration import Configuration, bits_to_mask, flip, masks_to_bits, swap
from .events import (
    IncreasingEvent,
    always_false,
    always_true,
    check_increasing,
    default_event_suite,
    dictator,
    from_minterms,
    from_oracle,
    majority,
    random_dnf,
    threshold,
    tribes,
)
from .influence import (
    InfluenceVector,
    influence_exact,
    influence_mc,
    influences_exact,
    influences_mc,
    is_pivotal,
    is_pivotal_pair,
    is_zero_pivotal,
    probability_exact,
)
from .measure import DisagreementLaw, KOutOfN, disagreement_distribution

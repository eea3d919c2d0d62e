"""三角格渗流

功能:
- TriangularBox / build_box: R×R 盒子 V_R 及其边
- 横向穿越 A_R: 并查集参考判定, ndimage 批量判定, 空竖穿对偶
- 0-关键点计数 (翻转重算或分支触边), 四臂结构交叉检查
- 探索路径决策树 T_{v0} 及其 τ
- 实验: 穿越概率, 离散导数, E[N^0] 标度, 揭示概率, 单臂概率, 平均 OSSS 界, Russo 类比
"""

from .box import OFFSETS, TriangularBox, build_box
from .crossing import (
    UnionFind,
    batch_crossings,
    batch_vertical_vacant_crossings,
    batch_zero_pivotal,
    count_zero_pivotal,
    crossing_event,
    duality_holds,
    four_arm_witness,
    has_horizontal_crossing,
    has_vertical_vacant_crossing,
    label_batch,
    zero_pivotal_sites,
)
from .experiments import (
    AveragedBoundReport,
    DerivativeEstimate,
    DerivativeExact,
    OneArmResult,
    RevealmentProfile,
    RussoReport,
    ScalingResult,
    ScalingRow,
    crossing_probability,
    crossing_probability_exact,
    crossing_probability_exact_curve,
    discrete_derivative,
    discrete_derivative_direct,
    discrete_derivative_exact,
    mean_zero_pivotal,
    mean_zero_pivotal_exact,
    one_arm_estimate,
    one_arm_events,
    one_arm_exact,
    osss_averaged_bound_check,
    pivotal_scaling_experiment,
    revealment_profile,
    russo_check,
)
from .exploration import (
    AgreementReport,
    ExplorationResult,
    ExplorationTree,
    check_exploration_agreement,
    exploration_tree,
    explore,
    minimal_tau,
)

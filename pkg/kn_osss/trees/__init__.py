"""决策树模块

功能:
- DecisionTree 及构造器: fixed_order / first_query / random_order / balanced_split
- run_tree: 执行记录与停时 τ (standard / fixed-weight 两种变体)
- tau_certificate_check: 重放与补全枚举校验 τ 的最小性
- revealments_exact / revealments_mc: 揭示概率向量
"""

from .revealment import (
    RevealmentVector,
    collect_revealed,
    expected_tau_exact,
    revealments_exact,
    revealments_from_orders,
    revealments_mc,
)
from .tau import Determiner, TauVariant, Transcript, as_variant, run_bits, run_tree, tau_certificate_check
from .tree import (
    DecisionTree,
    balanced_split,
    default_tree_suite,
    first_query,
    fixed_order,
    random_order,
)

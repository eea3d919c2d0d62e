"""OSSS 不等式

功能:
- verify_osss: 精确或蒙特卡洛地计算 P(A)(1-P(A)) 与 Σ I(e)δ_e + Σ I(e)δ̄, 以及各常数下是否成立
- report_from_samples: 由样本矩阵组装蒙特卡洛报告 (渗流应用复用)
- search_constant: 在事件族 × 树族 × 测度网格上搜索最大比值
"""

from .report import OsssReport, assemble_exact, orders_to_matrix, report_from_samples, sample_pivotals, verify_osss
from .search import SearchResult, search_constant

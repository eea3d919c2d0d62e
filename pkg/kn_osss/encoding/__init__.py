"""F^μ 编码

功能:
- encode_fmu / encode_fmu_batch: 用均匀种子按条件概率逐位编码 P_{k,n}
- coupled_pair_law / shared_seed_joint: 相邻两层的交换耦合及其共享种子模拟
- logn_sum_estimate / logn_sum_exact / logn_bracket: 混合编码和按 log n 增长的演示
"""

from .coupled import CoupledPairLaw, SharedSeedResult, coupled_pair_law, shared_seed_joint
from .fmu import UniformSeed, encode_fmu, encode_fmu_batch, hybrid_encodings
from .logn import LognResult, last_bit_indicators, logn_bracket, logn_sum_estimate, logn_sum_exact

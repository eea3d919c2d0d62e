from pydantic import BaseModel, Field

from ..utils.config import get_plugin_config


class Config(BaseModel):
    # 按匹配求和的精确检查允许的最大 n
    coupling_exact_max_n: int = Field(default=6, ge=1)
    # TERM 拆分阈值 c1 (分子/分母)
    coupling_c1_numerator: int = 1
    coupling_c1_denominator: int = 4
    # 报告中保留的不一致单元个数
    coupling_report_mismatches: int = 5


plugin_config = get_plugin_config(Config)

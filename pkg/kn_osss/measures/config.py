from pydantic import BaseModel, Field

from ..utils.config import get_plugin_config


class Config(BaseModel):
    # 精确枚举的配置数上限
    measures_enumeration_cap: int = Field(default=10**8, ge=1)
    # 穷举检查单调性的最大 n
    measures_exhaustive_monotone_n: int = 12
    # threshold / majority 附带极小项证书的最大 n
    measures_threshold_minterm_n: int = 12
    # 随机单调性检查的可比较对数量
    measures_monotone_pairs: int = 10**4
    # 蒙特卡洛每批样本数
    measures_batch_size: int = 4096


plugin_config = get_plugin_config(Config)

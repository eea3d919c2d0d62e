from pydantic import BaseModel, Field

from ..utils.config import get_plugin_config


class Config(BaseModel):
    # 蒙特卡洛每批的样本数
    encoding_batch_size: int = Field(default=2000, ge=1)
    # binom(n, n/2) 不超过该值时精确计算对比括号
    encoding_exact_bracket_cap: int = 100_000
    # 对比括号走蒙特卡洛时的样本数
    encoding_bracket_samples: int = Field(default=200, ge=2)


plugin_config = get_plugin_config(Config)

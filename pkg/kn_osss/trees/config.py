from pydantic import BaseModel, Field

from ..utils.config import get_plugin_config


class Config(BaseModel):
    # tau 最小性证书检查允许的最大 n
    trees_certificate_max_n: int = Field(default=20, ge=1)
    # 判定缓存的最大条目数, 超过后清空
    trees_memo_limit: int = Field(default=1_000_000, ge=0)
    # 默认 tau 变体: standard | fixed-weight
    trees_tau_variant: str = "standard"


plugin_config = get_plugin_config(Config)

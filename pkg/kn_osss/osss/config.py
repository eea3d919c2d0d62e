from pydantic import BaseModel, Field

from ..utils.config import get_plugin_config


class Config(BaseModel):
    # 默认检查的常数 C
    osss_constants: list[float] = [20.0]
    # C = 20 适用的最小 n
    osss_c20_min_n: int = Field(default=10, ge=1)
    # 第二部分 (一般 k) 的 ε 分层
    osss_epsilon_grid: list[float] = [0.1, 0.2, 0.3, 0.4, 0.5]
    # 蒙特卡洛比较使用的标准误倍数
    osss_mc_sigmas: float = Field(default=4.0, gt=0)


plugin_config = get_plugin_config(Config)

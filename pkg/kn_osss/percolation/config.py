from pydantic import BaseModel, Field

from ..utils.config import get_plugin_config


class Config(BaseModel):
    # 批量标记连通分支时每批的样本数
    percolation_batch_size: int = Field(default=1000, ge=1)
    # 精确枚举允许的最大配置数
    percolation_exact_cap: int = 1_000_000
    # Russo 恒等式对一般事件的精确检查上限
    percolation_russo_max_n: int = 12
    # 标度实验的默认边长与样本数
    percolation_default_sizes: list[int] = [8, 16, 32, 64]
    percolation_samples: int = Field(default=100_000, ge=1)
    # 界面行走步数上限 = 系数 * (R+2)^2 + 10
    percolation_step_cap_factor: int = Field(default=6, ge=1)
    # 单臂概率精确枚举允许的最大格点数
    percolation_one_arm_exact_max_sites: int = 16


plugin_config = get_plugin_config(Config)

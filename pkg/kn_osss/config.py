from pydantic import BaseModel, Field

from .utils.config import get_plugin_config


class Config(BaseModel):
    # 默认线程数, 对应环境变量 KN_OSSS_WORKERS
    kn_osss_workers: int = Field(default=1, ge=1)
    # 输出目录
    kn_osss_output_dir: str = "results"
    # 日志级别
    kn_osss_log_level: str = "INFO"


global_config = get_plugin_config(Config)

"""各子命令的实验配置

优先级: 命令行参数 > 配置文件 > 环境变量 (KN_OSSS_WORKERS 等) > 默认值
"""

from fractions import Fraction
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..config import global_config


def _even(values: list[int], label: str) -> list[int]:
    for v in values:
        if v < 2 or v % 2:
            raise ValueError(f"{label} 必须是不小于 2 的偶数, 收到 {v}")
    return values


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    subcommand: str
    # 根种子, 64 位
    seed: int = Field(default=0, ge=0, lt=2**64)
    workers: int = Field(default_factory=lambda: global_config.kn_osss_workers, ge=1)
    output_dir: str = Field(default_factory=lambda: global_config.kn_osss_output_dir)
    tau_variant: Literal["standard", "fixed-weight"] = "standard"


class VerifyOsssConfig(ExperimentConfig):
    subcommand: Literal["verify-osss"] = "verify-osss"
    n: list[int] = [10]
    # 不给出时取 k = n // 2
    k: Optional[list[int]] = None
    suite_size: int = Field(default=200, ge=1)
    trees: int = Field(default=3, ge=1)
    constants: list[float] = [20.0]
    engine: Literal["exact", "mc"] = "exact"
    samples: int = Field(default=10_000, ge=2)
    epsilon_grid: list[float] = [0.1, 0.2, 0.3, 0.4, 0.5]

    @field_validator("n")
    @classmethod
    def _positive(cls, v: list[int]) -> list[int]:
        if not v or any(x < 1 for x in v):
            raise ValueError("n 必须是非空的正整数列表")
        return v


class CheckCouplingConfig(ExperimentConfig):
    subcommand: Literal["check-coupling"] = "check-coupling"
    n: int = Field(default=4, ge=1, le=6)
    k: int = Field(default=2, ge=0)
    events: int = Field(default=20, ge=1)
    trees: int = Field(default=3, ge=1)
    # 写成 "1/4" 形式
    c1: str = "1/4"
    # 大于 0 时额外跑分解恒等式的蒙特卡洛版本
    mc_samples: int = Field(default=0, ge=0)
    # 蒙特卡洛版本使用的 n (k = n // 2) 和事件个数, 不受精确检查的 n <= 6 限制
    mc_n: int = Field(default=20, ge=2)
    mc_events: int = Field(default=3, ge=1)

    @field_validator("c1")
    @classmethod
    def _fraction(cls, v: str) -> str:
        try:
            value = Fraction(v)
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"c1 必须是有理数, 收到 {v!r}") from e
        if value <= 0:
            raise ValueError(f"c1 必须为正, 收到 {v!r}")
        return v

    @property
    def c1_value(self) -> Fraction:
        return Fraction(self.c1)


class CheckRussoConfig(ExperimentConfig):
    subcommand: Literal["check-russo"] = "check-russo"
    n: int = Field(default=10, ge=1, le=12)
    events: int = Field(default=5, ge=1)
    include_box: bool = True


class LognDemoConfig(ExperimentConfig):
    subcommand: Literal["logn-demo"] = "logn-demo"
    n: list[int] = [16, 32, 64, 128, 256, 512]
    samples: int = Field(default=100_000, ge=2)
    min_r_squared: float = 0.9
    # 交换耦合检查的 m 列表, 空列表表示跳过
    coupling_m: list[int] = [2, 3, 4, 5]
    coupling_samples: int = Field(default=1_000_000, ge=1)
    max_tv: float = Field(default=0.01, gt=0)

    @field_validator("n")
    @classmethod
    def _even_n(cls, v: list[int]) -> list[int]:
        return _even(v, "n")


class PercolationCrossingConfig(ExperimentConfig):
    subcommand: Literal["percolation-crossing"] = "percolation-crossing"
    R: list[int] = [2, 4, 8, 16]
    # 不给出时取 k = R^2 / 2
    k: Optional[int] = None
    samples: int = Field(default=100_000, ge=2)
    agreement_samples: int = Field(default=10_000, ge=1)
    # binom(R^2, R^2/2) 不超过该值时穷举检查探索树
    exhaustive_cap: int = 20_000
    anchors: Optional[list[int]] = None

    @field_validator("R")
    @classmethod
    def _positive(cls, v: list[int]) -> list[int]:
        if not v or any(x < 1 for x in v):
            raise ValueError("R 必须是非空的正整数列表")
        return v


class PivotalScalingConfig(ExperimentConfig):
    subcommand: Literal["pivotal-scaling"] = "pivotal-scaling"
    R: list[int] = [8, 16, 32, 64]
    samples: int = Field(default=100_000, ge=2)
    revealment_samples: int = Field(default=2_000, ge=1)
    revealment_R: list[int] = [8, 16, 32]
    bound_R: list[int] = [2, 8, 16]
    bound_samples: int = Field(default=2_000, ge=2)
    anchors: Optional[list[int]] = None
    one_arm_M: list[int] = [2, 4, 8, 16]
    one_arm_samples: int = Field(default=10_000, ge=2)
    constants: list[float] = [20.0]

    @field_validator("R", "revealment_R", "bound_R")
    @classmethod
    def _even_R(cls, v: list[int]) -> list[int]:
        return _even(v, "R")

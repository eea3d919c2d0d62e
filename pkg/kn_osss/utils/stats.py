"""统计工具

蒙特卡洛估计值, 卡方检验, 直线/双对数拟合, 全变差距离
"""

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from .errors import ParameterError


# ==================== 估计值 ====================


@dataclass(frozen=True)
class Estimate:
    """蒙特卡洛估计: 均值, 标准误 (样本标准差 / sqrt(样本数)), 样本数"""
    mean: float
    stderr: float
    samples: int

    def z_score(self, target: float) -> float:
        diff = self.mean - float(target)
        if self.stderr == 0:
            return 0.0 if abs(diff) < 1e-12 else math.copysign(math.inf, diff)
        return diff / self.stderr

    def within(self, target: float, sigmas: float) -> bool:
        """|mean - target| <= sigmas * stderr"""
        return abs(self.mean - float(target)) <= sigmas * self.stderr + 1e-12

    def scaled(self, factor: float) -> "Estimate":
        return Estimate(self.mean * factor, self.stderr * abs(factor), self.samples)

    def to_dict(self) -> dict:
        return {"mean": self.mean, "stderr": self.stderr, "samples": self.samples}


def estimate_from_sums(total: float, total_sq: float, samples: int) -> Estimate:
    """由样本和与平方和构造估计值, 方差取 ddof=1"""
    if samples < 1:
        return Estimate(0.0, 0.0, 0)
    mean = total / samples
    if samples == 1:
        return Estimate(float(mean), 0.0, 1)
    var = (total_sq - samples * mean * mean) / (samples - 1)
    var = max(float(var), 0.0)
    return Estimate(float(mean), math.sqrt(var / samples), samples)


def estimate_from_values(values: np.ndarray) -> Estimate:
    values = np.asarray(values, dtype=float)
    n = values.size
    if n == 0:
        return Estimate(0.0, 0.0, 0)
    std = float(values.std(ddof=1)) if n > 1 else 0.0
    return Estimate(float(values.mean()), std / math.sqrt(n), n)


def difference(a: Estimate, b: Estimate) -> Estimate:
    """两个独立估计之差"""
    return Estimate(a.mean - b.mean, math.hypot(a.stderr, b.stderr), min(a.samples, b.samples))


# ==================== 检验与距离 ====================


def chi_square_uniform(counts: Sequence[int]) -> float:
    """对均匀分布做卡方拟合优度检验, 返回 p 值"""
    observed = np.asarray(counts, dtype=float)
    return float(stats.chisquare(observed).pvalue)


def total_variation(p: Mapping, q: Mapping) -> float:
    """两个离散分布的全变差距离"""
    keys = set(p) | set(q)
    return 0.5 * sum(abs(float(p.get(key, 0)) - float(q.get(key, 0))) for key in keys)


# ==================== 拟合 ====================


@dataclass(frozen=True)
class LineFit:
    """最小二乘直线拟合结果, 置信区间为 95% t 区间"""
    slope: float
    intercept: float
    slope_stderr: float
    ci_low: float
    ci_high: float
    r_squared: float
    residuals: tuple[float, ...] = field(default_factory=tuple)

    @property
    def ci_excludes_zero(self) -> bool:
        return self.ci_low > 0 or self.ci_high < 0

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "slope_stderr": self.slope_stderr,
            "ci95": [self.ci_low, self.ci_high],
            "r_squared": self.r_squared,
            "residuals": list(self.residuals),
        }


def fit_line(x: Sequence[float], y: Sequence[float]) -> LineFit:
    """
    无权最小二乘拟合 y = slope * x + intercept

    少于三个点时无法给出区间, 区间取 (-inf, inf)
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    result = stats.linregress(x, y)
    slope = float(result.slope)
    intercept = float(result.intercept)
    residuals = tuple(float(r) for r in y - (slope * x + intercept))
    dof = len(x) - 2
    if dof < 1:
        return LineFit(slope, intercept, math.inf, -math.inf, math.inf, float(result.rvalue) ** 2, residuals)
    t_crit = float(stats.t.ppf(0.975, dof))
    se = float(result.stderr)
    return LineFit(
        slope=slope,
        intercept=intercept,
        slope_stderr=se,
        ci_low=slope - t_crit * se,
        ci_high=slope + t_crit * se,
        r_squared=float(result.rvalue) ** 2,
        residuals=residuals,
    )


def fit_loglog(x: Sequence[float], y: Sequence[float]) -> LineFit:
    """在 (log x, log y) 上做直线拟合, 斜率即幂指数"""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x <= 0) or np.any(y <= 0):
        raise ParameterError("双对数拟合要求所有数据为正")
    return fit_line(np.log(x), np.log(y))

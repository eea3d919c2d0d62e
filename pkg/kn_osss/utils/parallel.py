"""随机数流与线程池

蒙特卡洛入口统一接受整数种子, SeedSequence 或 numpy Generator.
样本按 divmod 切成连续的块, 每块使用由根种子 spawn 出的独立流;
各块返回整数累加量, 按块顺序合并, 因此 (seed, workers) 相同则结果逐位相同.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar, Union

import numpy as np

from .errors import ParameterError


SeedLike = Union[int, np.random.SeedSequence, np.random.Generator, None]

_T = TypeVar("_T")
_R = TypeVar("_R")


def derive_seed(seed: SeedLike, *keys: int) -> np.random.SeedSequence:
    """
    由根种子和若干整数键派生子种子

    同一根种子下, 不同键得到互不相关的流, 增删其他键不影响已有键的结果
    """
    if isinstance(seed, np.random.Generator):
        entropy = int(seed.integers(2**63))
        return np.random.SeedSequence(entropy, spawn_key=tuple(keys))
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(seed.entropy, spawn_key=tuple(seed.spawn_key) + tuple(keys))
    return np.random.SeedSequence(seed, spawn_key=tuple(keys))


def as_generator(seed: SeedLike) -> np.random.Generator:
    """把种子统一转为 Generator; 传入 Generator 时原样返回"""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def split_streams(seed: SeedLike, workers: int) -> list[np.random.Generator]:
    """从根种子 spawn 出 workers 条独立流"""
    if workers < 1:
        raise ParameterError(f"workers 必须为正整数, 收到 {workers}")
    if isinstance(seed, np.random.Generator):
        root = np.random.SeedSequence(int(seed.integers(2**63)))
    elif isinstance(seed, np.random.SeedSequence):
        root = seed
    else:
        root = np.random.SeedSequence(seed)
    return [np.random.default_rng(child) for child in root.spawn(workers)]


def split_samples(samples: int, parts: int) -> list[int]:
    """把样本数切成 parts 个尽量均匀的连续块"""
    q, r = divmod(samples, parts)
    return [q + (1 if i < r else 0) for i in range(parts)]


def run_chunks(
    fn: Callable[[int, np.random.Generator], _R],
    samples: int,
    seed: SeedLike,
    workers: int = 1,
) -> list[_R]:
    """
    把 samples 个样本分给 workers 个线程

    Args:
        fn: fn(块内样本数, 该块的 Generator) -> 该块的累加结果
        samples: 总样本数
        seed: 根种子
        workers: 线程数

    Returns:
        按块顺序排列的结果列表
    """
    if samples < 1:
        raise ParameterError(f"样本数必须为正整数, 收到 {samples}")
    workers = max(1, min(workers, samples))
    streams = split_streams(seed, workers)
    sizes = split_samples(samples, workers)
    if workers == 1:
        return [fn(sizes[0], streams[0])]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, size, rng) for size, rng in zip(sizes, streams)]
        return [future.result() for future in futures]


def map_tasks(fn: Callable[[_T], _R], items: Iterable[_T], workers: int = 1) -> list[_R]:
    """按输入顺序并行执行相互独立的任务"""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def batch_sizes(total: int, batch: int) -> Sequence[int]:
    """把 total 切成不超过 batch 的批次"""
    full, rest = divmod(total, batch)
    return [batch] * full + ([rest] if rest else [])

"""公共工具: 异常, 配置加载, 随机数流与线程池, 统计"""

from .errors import (
    DimensionError,
    ElementIndexError,
    KnOsssException,
    MatchingError,
    NotIncreasingError,
    ParameterError,
    ResourceCapError,
    TreeDefinitionError,
)
from .config import get_plugin_config, load_config_file
from .parallel import SeedLike, as_generator, derive_seed, map_tasks, run_chunks, split_streams
from .stats import Estimate, LineFit, estimate_from_sums, fit_line, fit_loglog

"""异常定义

所有库代码抛出的异常都继承自 KnOsssException, 只有命令行层负责把异常转换为退出码
"""


class KnOsssException(Exception):
    """kn-osss 异常基类"""
    pass


class DimensionError(KnOsssException):
    """配置长度与基集大小不一致"""
    pass


class ElementIndexError(KnOsssException, IndexError):
    """元素下标越界"""
    pass


class ParameterError(KnOsssException, ValueError):
    """参数不满足前置条件"""
    pass


class ResourceCapError(KnOsssException):
    """精确枚举规模超过上限"""
    pass


class TreeDefinitionError(KnOsssException):
    """决策树违反后继规则约定"""
    pass


class MatchingError(KnOsssException):
    """匹配无定义 (权重不同) 或匹配本身不合法"""
    pass


class NotIncreasingError(KnOsssException):
    """事件不满足单调递增约定"""
    pass

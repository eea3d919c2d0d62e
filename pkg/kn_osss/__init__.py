"""kn-osss

k-out-of-n 测度下 OSSS 型不等式的精确/蒙特卡洛验证工具, 以及三角格点固定占据数渗流的应用实验
"""

__version__ = "0.1.0"

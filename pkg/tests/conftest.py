import pytest
from loguru import logger


@pytest.fixture(autouse=True)
def _quiet_logger():
    """测试中只保留 WARNING 以上的日志; 命令行会自己重装 sink, 结束时统一清掉"""
    logger.remove()
    logger.add(lambda msg: None, level="WARNING")
    yield
    logger.remove()

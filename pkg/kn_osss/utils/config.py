"""配置加载

仿照 NoneBot 的 get_plugin_config: 读取一次 .env, 再按字段名的大写形式从环境变量取值,
交给 pydantic 做校验. 列表/字典类型的值用 JSON 书写.
"""

import json
import os
import sys
from pathlib import Path
from typing import Any, TypeVar

from dotenv import load_dotenv
from pydantic import BaseModel

from .errors import ParameterError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


_ModelT = TypeVar("_ModelT", bound=BaseModel)

_env_loaded = False


def _ensure_env():
    """确保 .env 只加载一次"""
    global _env_loaded
    if not _env_loaded:
        load_dotenv()
        _env_loaded = True


def _parse_env_value(raw: str) -> Any:
    text = raw.strip()
    if text[:1] in ("[", "{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError:
            pass
    return raw


def get_plugin_config(config_cls: type[_ModelT]) -> _ModelT:
    """
    从环境变量构造配置对象

    Args:
        config_cls: pydantic 配置类, 字段名即环境变量名 (小写)

    Returns:
        校验后的配置实例, 未设置的字段使用默认值
    """
    _ensure_env()
    values = {}
    for name in config_cls.model_fields:
        raw = os.environ.get(name.upper())
        if raw is not None:
            values[name] = _parse_env_value(raw)
    return config_cls.model_validate(values)


def load_config_file(path: str | Path) -> dict:
    """
    读取 JSON 或 TOML 配置文件

    运行清单 (manifest.json) 也可以直接作为配置文件, 此时取其中的 config 字段
    """
    path = Path(path)
    try:
        if path.suffix.lower() == ".toml":
            with open(path, "rb") as f:
                data = tomllib.load(f)
        else:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
    except (OSError, json.JSONDecodeError, tomllib.TOMLDecodeError) as e:
        raise ParameterError(f"无法读取配置文件 {path}: {e}") from e
    if not isinstance(data, dict):
        raise ParameterError(f"配置文件 {path} 顶层必须是对象")
    if isinstance(data.get("config"), dict):
        data = data["config"]
    return data

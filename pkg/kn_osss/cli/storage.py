"""结果文件读写

JSON 用于清单和精确有理数 ({"numerator": "...", "denominator": "..."}), CSV 用于绘图数据.
浮点数一律按 repr 写出, 相同输入重跑得到逐字节相同的文件.
"""

import csv
import dataclasses
import json
import math
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np
from loguru import logger
from pydantic import BaseModel

from ..utils.stats import Estimate


def _ensure_dir(path: Path):
    """确保文件所在目录存在"""
    path.parent.mkdir(parents=True, exist_ok=True)


def _float(value: float) -> Any:
    if math.isnan(value) or math.isinf(value):
        return repr(value)
    return value


def to_jsonable(obj: Any) -> Any:
    """把结果对象转成 JSON 可写的结构"""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, Fraction):
        return {"numerator": str(obj.numerator), "denominator": str(obj.denominator)}
    if isinstance(obj, float):
        return _float(obj)
    if isinstance(obj, np.generic):
        return to_jsonable(obj.item())
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Estimate):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, BaseModel):
        return {name: to_jsonable(getattr(obj, name)) for name in type(obj).model_fields}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(key): to_jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(item) for item in items]
    return str(obj)


def save_json(path: str | Path, data: Any):
    path = Path(path)
    _ensure_dir(path)
    try:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(to_jsonable(data), f, ensure_ascii=False, indent=2)
            f.write("\n")
    except IOError as e:
        logger.error(f"写入 {path} 失败: {e}")
        raise


def load_json(path: str | Path) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def format_cell(value: Any) -> str:
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def save_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]):
    path = Path(path)
    _ensure_dir(path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_cell(v) for v in row])
    except IOError as e:
        logger.error(f"写入 {path} 失败: {e}")
        raise


def load_csv(path: str | Path) -> list[dict[str, str]]:
    with open(path, "r", encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))

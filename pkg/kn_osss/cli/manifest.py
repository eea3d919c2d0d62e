"""运行清单

清单里回显解析后的配置, 用 --config manifest.json 即可重跑同一次实验.
"""

import subprocess
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional

from loguru import logger
from pydantic import BaseModel, Field

from .. import __version__


class AssertionRecord(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class RunManifest(BaseModel):
    subcommand: str
    version: str
    started_at: str
    wall_time: float = 0.0
    config: dict[str, Any]
    results: dict[str, Any] = Field(default_factory=dict)
    assertions: list[AssertionRecord] = Field(default_factory=list)
    files: list[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def failures(self) -> list[str]:
        return [a.name for a in self.assertions if not a.passed]


def describe_version() -> str:
    """git describe 风格的版本号, 不在仓库中时退回包版本"""
    try:
        out = subprocess.run(
            ["git", "describe", "--tags", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
    except (OSError, subprocess.SubprocessError):
        return __version__
    text = out.stdout.strip()
    return text if out.returncode == 0 and text else __version__


class ManifestBuilder:
    """收集断言, 结果与输出文件, 结束时生成清单"""

    def __init__(self, subcommand: str, config: dict[str, Any]):
        self.subcommand = subcommand
        self.config = config
        self.started_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
        self._start = time.perf_counter()
        self.results: dict[str, Any] = {}
        self.assertions: list[AssertionRecord] = []
        self.files: list[str] = []

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        passed = bool(passed)
        self.assertions.append(AssertionRecord(name=name, passed=passed, detail=detail))
        if passed:
            logger.info(f"[通过] {name} {detail}".rstrip())
        else:
            logger.error(f"[失败] {name} {detail}".rstrip())
        return passed

    def add_file(self, path: Path, root: Optional[Path] = None):
        self.files.append(str(path.relative_to(root)) if root else str(path))

    def build(self) -> RunManifest:
        return RunManifest(
            subcommand=self.subcommand,
            version=describe_version(),
            started_at=self.started_at,
            wall_time=round(time.perf_counter() - self._start, 3),
            config=self.config,
            results=self.results,
            assertions=self.assertions,
            files=self.files,
        )

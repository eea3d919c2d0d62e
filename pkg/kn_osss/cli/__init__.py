"""命令行入口与结果输出"""

from .app import main
from .config import (
    CheckCouplingConfig,
    CheckRussoConfig,
    ExperimentConfig,
    LognDemoConfig,
    PercolationCrossingConfig,
    PivotalScalingConfig,
    VerifyOsssConfig,
)
from .manifest import AssertionRecord, ManifestBuilder, RunManifest, describe_version
from .storage import load_csv, load_json, save_csv, save_json, to_jsonable

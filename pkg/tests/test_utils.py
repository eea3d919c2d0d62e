import json
import math

import numpy as np
import pytest
from pydantic import BaseModel, Field

from kn_osss.utils.config import get_plugin_config, load_config_file
from kn_osss.utils.errors import KnOsssException, ParameterError, ResourceCapError
from kn_osss.utils.parallel import batch_sizes, derive_seed, map_tasks, run_chunks, split_samples
from kn_osss.utils.stats import (
    Estimate,
    chi_square_uniform,
    difference,
    estimate_from_sums,
    estimate_from_values,
    fit_line,
    fit_loglog,
    total_variation,
)


# ==================== 随机数流 ====================


def test_derive_seed_is_reproducible():
    a = np.random.default_rng(derive_seed(7, 3, 1)).random(5)
    b = np.random.default_rng(derive_seed(7, 3, 1)).random(5)
    c = np.random.default_rng(derive_seed(7, 3, 2)).random(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_derive_seed_nests():
    nested = derive_seed(derive_seed(11, 4), 2)
    flat = derive_seed(11, 4, 2)
    assert np.array_equal(np.random.default_rng(nested).random(3), np.random.default_rng(flat).random(3))


@pytest.mark.parametrize("samples, parts", [(10, 3), (7, 7), (100, 1), (5, 2)])
def test_split_samples(samples, parts):
    sizes = split_samples(samples, parts)
    assert sum(sizes) == samples
    assert max(sizes) - min(sizes) <= 1


def test_batch_sizes():
    assert list(batch_sizes(10, 4)) == [4, 4, 2]
    assert list(batch_sizes(8, 4)) == [4, 4]
    assert list(batch_sizes(0, 4)) == []


def _count_heads(size, rng):
    return int((rng.random(size) < 0.5).sum())


@pytest.mark.parametrize("workers", [1, 3])
def test_run_chunks_deterministic(workers):
    first = run_chunks(_count_heads, 1000, 5, workers)
    second = run_chunks(_count_heads, 1000, 5, workers)
    assert first == second
    assert len(first) == workers


def test_run_chunks_rejects_empty():
    with pytest.raises(ParameterError):
        run_chunks(_count_heads, 0, 1)


def test_map_tasks_keeps_order():
    assert map_tasks(lambda x: x * x, range(10), workers=4) == [x * x for x in range(10)]


# ==================== 统计 ====================


def test_estimate_from_sums_matches_values():
    values = np.array([0, 1, 1, 0, 1, 1, 1, 0], dtype=float)
    a = estimate_from_sums(values.sum(), (values ** 2).sum(), values.size)
    b = estimate_from_values(values)
    assert a.mean == pytest.approx(b.mean)
    assert a.stderr == pytest.approx(b.stderr)
    assert a.samples == b.samples == 8


def test_estimate_helpers():
    est = Estimate(1.0, 0.1, 100)
    assert est.within(1.35, 4.0)
    assert not est.within(1.5, 4.0)
    assert est.z_score(0.5) == pytest.approx(5.0)
    assert est.scaled(-2).stderr == pytest.approx(0.2)
    diff = difference(Estimate(2.0, 0.3, 10), Estimate(1.0, 0.4, 10))
    assert diff.mean == pytest.approx(1.0)
    assert diff.stderr == pytest.approx(0.5)


def test_zero_stderr_z_score():
    assert Estimate(0.5, 0.0, 10).z_score(0.5) == 0.0
    assert math.isinf(Estimate(0.6, 0.0, 10).z_score(0.5))


def test_total_variation():
    assert total_variation({"a": 0.5, "b": 0.5}, {"a": 0.5, "b": 0.5}) == 0.0
    assert total_variation({"a": 1.0}, {"b": 1.0}) == pytest.approx(1.0)


def test_chi_square_uniform_accepts_flat_counts():
    assert chi_square_uniform([100, 100, 100, 100]) == pytest.approx(1.0)


def test_fit_line_exact():
    fit = fit_line([1, 2, 3, 4], [3, 5, 7, 9])
    assert fit.slope == pytest.approx(2.0)
    assert fit.intercept == pytest.approx(1.0)
    assert fit.r_squared == pytest.approx(1.0)


def test_fit_loglog_power_law():
    x = [2, 4, 8, 16]
    fit = fit_loglog(x, [3 * v ** 0.75 for v in x])
    assert fit.slope == pytest.approx(0.75)
    with pytest.raises(ParameterError):
        fit_loglog([1, 2], [0, 1])


def test_fit_line_two_points_has_open_interval():
    fit = fit_line([0, 1], [0, 1])
    assert fit.ci_low == -math.inf and fit.ci_high == math.inf
    assert not fit.ci_excludes_zero


# ==================== 配置与异常 ====================


class _DemoConfig(BaseModel):
    kn_osss_demo_sizes: list[int] = [1, 2]
    kn_osss_demo_count: int = Field(default=3, ge=1)


def test_get_plugin_config_reads_environment(monkeypatch):
    monkeypatch.setenv("KN_OSSS_DEMO_SIZES", "[4, 8]")
    monkeypatch.setenv("KN_OSSS_DEMO_COUNT", "5")
    config = get_plugin_config(_DemoConfig)
    assert config.kn_osss_demo_sizes == [4, 8]
    assert config.kn_osss_demo_count == 5


def test_get_plugin_config_defaults(monkeypatch):
    monkeypatch.delenv("KN_OSSS_DEMO_SIZES", raising=False)
    monkeypatch.delenv("KN_OSSS_DEMO_COUNT", raising=False)
    assert get_plugin_config(_DemoConfig).kn_osss_demo_count == 3


def test_load_config_file_json_and_toml(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"n": [10], "seed": 3}), encoding="utf-8")
    assert load_config_file(path) == {"n": [10], "seed": 3}

    toml = tmp_path / "run.toml"
    toml.write_text('n = [10, 12]\nseed = 4\n', encoding="utf-8")
    assert load_config_file(toml) == {"n": [10, 12], "seed": 4}


def test_load_config_file_unwraps_manifest(tmp_path):
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps({"subcommand": "logn-demo", "config": {"n": [16]}}), encoding="utf-8")
    assert load_config_file(path) == {"n": [16]}


def test_load_config_file_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ParameterError):
        load_config_file(bad)
    with pytest.raises(ParameterError):
        load_config_file(tmp_path / "missing.json")


def test_exception_hierarchy():
    assert issubclass(ParameterError, KnOsssException)
    assert issubclass(ParameterError, ValueError)
    assert issubclass(ResourceCapError, KnOsssException)

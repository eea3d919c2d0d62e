import json

import pytest
from click.testing import CliRunner

from kn_osss.cli import load_csv, load_json, main


def invoke(*args: str):
    return CliRunner().invoke(main, [str(a) for a in args])


def read_outputs(root, names):
    return {name: (root / name).read_bytes() for name in names}


# ==================== check-coupling ====================


def test_check_coupling_passes(tmp_path):
    result = invoke("check-coupling", "--n", 4, "--k", 2, "--events", 20, "--trees", 3, "--seed", 7,
                    "--output-dir", tmp_path)
    assert result.exit_code == 0, result.output
    root = tmp_path / "check-coupling"
    manifest = load_json(root / "manifest.json")
    assert manifest["subcommand"] == "check-coupling"
    assert manifest["config"]["seed"] == 7
    assert all(a["passed"] for a in manifest["assertions"])
    assert {a["name"] for a in manifest["assertions"]} >= {"z_marginal", "term_identity", "term1_bound", "claim"}
    assert manifest["files"] == ["coupling.csv"]
    assert len(load_csv(root / "coupling.csv")) == 60


def test_manifest_reruns_same_experiment(tmp_path):
    args = ("check-coupling", "--n", 4, "--events", 5, "--trees", 2, "--seed", 11, "--output-dir", tmp_path)
    assert invoke(*args).exit_code == 0
    root = tmp_path / "check-coupling"
    first = read_outputs(root, ["coupling.csv"])
    saved = root / "saved.json"
    saved.write_text((root / "manifest.json").read_text(encoding="utf-8"), encoding="utf-8")

    result = invoke("check-coupling", "--config", saved)
    assert result.exit_code == 0, result.output
    assert read_outputs(root, ["coupling.csv"]) == first
    assert load_json(root / "manifest.json")["config"] == load_json(saved)["config"]


def test_flags_override_config_file(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"subcommand": "check-coupling", "n": 2, "k": 1, "events": 2, "trees": 1}))
    result = invoke("check-coupling", "--config", config, "--events", 3, "--output-dir", tmp_path)
    assert result.exit_code == 0, result.output
    manifest = load_json(tmp_path / "check-coupling" / "manifest.json")
    assert manifest["config"]["n"] == 2
    assert manifest["config"]["events"] == 3


def test_check_coupling_with_sampling(tmp_path):
    result = invoke("check-coupling", "--n", 2, "--k", 1, "--events", 2, "--trees", 1, "--mc-samples", 4_000,
                    "--mc-n", 8, "--mc-events", 2, "--seed", 3, "--output-dir", tmp_path)
    assert result.exit_code == 0, result.output
    root = tmp_path / "check-coupling"
    assert load_json(root / "manifest.json")["files"] == ["coupling.csv", "coupling_mc.csv"]
    rows = load_csv(root / "coupling_mc.csv")
    assert len(rows) == 2
    assert {row["n"] for row in rows} == {"8"}
    assert all(row["k"] == "4" for row in rows)


# ==================== 用法错误 ====================


def test_validation_error_exits_2(tmp_path):
    result = invoke("check-coupling", "--n", 9, "--output-dir", tmp_path)
    assert result.exit_code == 2
    assert not (tmp_path / "check-coupling" / "manifest.json").exists()


def test_bad_choice_exits_2(tmp_path):
    assert invoke("verify-osss", "--engine", "magic", "--output-dir", tmp_path).exit_code == 2


def test_bad_int_list_exits_2(tmp_path):
    assert invoke("logn-demo", "--n", "4,x", "--output-dir", tmp_path).exit_code == 2


def test_odd_size_exits_2(tmp_path):
    assert invoke("logn-demo", "--n", "4,7", "--output-dir", tmp_path).exit_code == 2


def test_subcommand_mismatch(tmp_path):
    config = tmp_path / "other.json"
    config.write_text(json.dumps({"subcommand": "logn-demo", "n": [4]}))
    result = invoke("check-coupling", "--config", config, "--output-dir", tmp_path)
    assert result.exit_code == 2


def test_unknown_config_key(tmp_path):
    config = tmp_path / "typo.toml"
    config.write_text('subcommand = "check-russo"\nn = 4\nevnts = 2\n')
    assert invoke("check-russo", "--config", config, "--output-dir", tmp_path).exit_code == 2


# ==================== 其余子命令 ====================


def test_check_russo(tmp_path):
    result = invoke("check-russo", "--n", 6, "--events", 3, "--output-dir", tmp_path)
    assert result.exit_code == 0, result.output
    rows = load_csv(tmp_path / "check-russo" / "russo.csv")
    assert len(rows) == 3 * 6 + 4
    assert rows[-2]["event"] == "crossing_R2"
    assert rows[-2]["lhs"] == "1/2"


def test_check_russo_without_box(tmp_path):
    result = invoke("check-russo", "--n", 4, "--events", 2, "--no-box", "--output-dir", tmp_path)
    assert result.exit_code == 0, result.output
    assert len(load_csv(tmp_path / "check-russo" / "russo.csv")) == 2 * 4


def test_verify_osss_small(tmp_path):
    result = invoke("verify-osss", "--n", 10, "--suite-size", 8, "--trees", 2, "--seed", 3,
                    "--output-dir", tmp_path)
    assert result.exit_code == 0, result.output
    root = tmp_path / "verify-osss"
    rows = load_csv(root / "verify_osss.csv")
    assert len(rows) == 16
    assert {row["mode"] for row in rows} == {"exact"}
    manifest = load_json(root / "manifest.json")
    assert [a["name"] for a in manifest["assertions"]] == ["osss_holds_C20", "bracket_positive"]


def test_verify_osss_small_n_is_report_only(tmp_path):
    result = invoke("verify-osss", "--n", 4, "--k", "1,2", "--suite-size", 4, "--trees", 1,
                    "--output-dir", tmp_path)
    assert result.exit_code == 0, result.output
    manifest = load_json(tmp_path / "verify-osss" / "manifest.json")
    assert [a["name"] for a in manifest["assertions"]] == ["bracket_positive"]


def test_logn_demo(tmp_path):
    result = invoke("logn-demo", "--n", "4,8,16", "--samples", 20_000, "--coupling-m", "2,3",
                    "--coupling-samples", 50_000, "--seed", 2, "--output-dir", tmp_path)
    assert result.exit_code == 0, result.output
    root = tmp_path / "logn-demo"
    summary = load_csv(root / "logn_summary.csv")
    assert [row["n"] for row in summary] == ["4", "8", "16"]
    assert len(load_csv(root / "logn_terms.csv")) == 4 + 8 + 16
    names = {a["name"] for a in load_json(root / "manifest.json")["assertions"]}
    assert {"logn_exact_n16", "bracket_bounded_n16", "logn_growth", "logn_r_squared"} <= names
    assert {"exchange_coupling_m2_k1", "exchange_coupling_m3_k1", "exchange_coupling_m3_k2"} <= names
    coupling = load_csv(root / "exchange_coupling.csv")
    assert [(row["m"], row["k"]) for row in coupling] == [("2", "1"), ("3", "1"), ("3", "2")]
    assert all(row["monotone"] == "true" for row in coupling)


def test_percolation_crossing_small(tmp_path):
    result = invoke("percolation-crossing", "--R", "2,4", "--seed", 1, "--output-dir", tmp_path)
    assert result.exit_code == 0, result.output
    root = tmp_path / "percolation-crossing"
    rows = load_csv(root / "crossing.csv")
    assert [(row["R"], row["k"], row["estimate"]) for row in rows] == [("2", "2", "1/2"), ("4", "8", "1/2")]
    curve = load_csv(root / "crossing_curve.csv")
    assert [row["probability"] for row in curve if row["R"] == "2"] == ["0", "0", "1/2", "1", "1"]
    agreement = load_csv(root / "agreement.csv")
    assert [row["checked"] for row in agreement] == ["6", "12870"]


def test_pivotal_scaling_is_deterministic(tmp_path):
    args = ["pivotal-scaling", "--R", "2,4", "--samples", 2_000, "--revealment-R", 2, "--revealment-samples", 50,
            "--bound-R", 2, "--one-arm-M", 1, "--one-arm-samples", 500, "--seed", 1]
    names = ["pivotal_scaling.csv", "revealment_R2.csv", "averaged_bound.csv", "one_arm.csv"]
    outputs = []
    for run in ("a", "b"):
        result = invoke(*args, "--output-dir", tmp_path / run)
        assert result.exit_code == 0, result.output
        outputs.append(read_outputs(tmp_path / run / "pivotal-scaling", names))
    assert outputs[0] == outputs[1]


@pytest.mark.slow
def test_verify_osss_default_suite(tmp_path):
    result = invoke("verify-osss", "--n", 10, "--suite-size", 200, "--trees", 3, "--constant", 20,
                    "--workers", 4, "--output-dir", tmp_path)
    assert result.exit_code == 0, result.output


@pytest.mark.slow
def test_pivotal_scaling_desktop(tmp_path):
    result = invoke("pivotal-scaling", "--R", "8,16,32", "--samples", 20_000, "--bound-R", 4,
                    "--workers", 4, "--seed", 1, "--output-dir", tmp_path)
    assert result.exit_code == 0, result.output

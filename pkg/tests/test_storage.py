import math
from fractions import Fraction

import numpy as np

from kn_osss.cli import ManifestBuilder, load_csv, load_json, save_csv, save_json, to_jsonable
from kn_osss.cli.storage import format_cell
from kn_osss.utils.stats import Estimate


def test_to_jsonable_values():
    data = {
        "p": Fraction(5, 11),
        "est": Estimate(0.5, 0.01, 100),
        "ratio": math.inf,
        "array": np.array([1, 2]),
        "count": np.int64(3),
        "sites": {3, 1},
    }
    assert to_jsonable(data) == {
        "p": {"numerator": "5", "denominator": "11"},
        "est": {"mean": 0.5, "stderr": 0.01, "samples": 100},
        "ratio": "inf",
        "array": [1, 2],
        "count": 3,
        "sites": [1, 3],
    }


def test_format_cell():
    assert format_cell(Fraction(1, 2)) == "1/2"
    assert format_cell(Fraction(2)) == "2"
    assert format_cell(0.1) == "0.1"
    assert format_cell(np.float64(0.25)) == "0.25"
    assert format_cell(True) == "true"
    assert format_cell(np.int32(7)) == "7"


def test_csv_is_byte_stable(tmp_path):
    rows = [[2, Fraction(1, 2), 0.1], [4, Fraction(1, 3), 1e-17]]
    save_csv(tmp_path / "a" / "x.csv", ["R", "p", "v"], rows)
    save_csv(tmp_path / "b" / "x.csv", ["R", "p", "v"], rows)
    first = (tmp_path / "a" / "x.csv").read_bytes()
    assert first == (tmp_path / "b" / "x.csv").read_bytes()
    assert first == b"R,p,v\n2,1/2,0.1\n4,1/3,1e-17\n"
    assert load_csv(tmp_path / "a" / "x.csv")[1] == {"R": "4", "p": "1/3", "v": "1e-17"}


def test_manifest_builder(tmp_path):
    builder = ManifestBuilder("check-russo", {"subcommand": "check-russo", "n": 4})
    builder.check("ok", True)
    builder.check("bad", False, "1/2")
    builder.add_file(tmp_path / "russo.csv", tmp_path)
    manifest = builder.build()
    assert not manifest.passed
    assert manifest.failures() == ["bad"]
    assert manifest.files == ["russo.csv"]

    save_json(tmp_path / "manifest.json", manifest)
    loaded = load_json(tmp_path / "manifest.json")
    assert loaded["config"] == {"subcommand": "check-russo", "n": 4}
    assert loaded["assertions"][1] == {"name": "bad", "passed": False, "detail": "1/2"}

"""
Tests for option merging, RunConfig validation and JSON logging.
"""
import json
import logging
from pathlib import Path

import pytest
from pydantic import ValidationError

from graspmaps.config import (
    GripperParams,
    MapMode,
    build_run_config,
    known_option_keys,
    load_config_file,
    merge_options,
    parse_thresholds,
)
from graspmaps.errors import InputError, StorageError
from graspmaps.logging import configure_logging, get_logger


class TestMergeOptions:
    def test_flags_win_and_none_falls_through(self):
        merged = merge_options({"sigma": 2.0, "bins": 5}, {"sigma": 0.5, "bins": None, "jobs": 4})
        assert merged == {"sigma": 0.5, "bins": 5, "jobs": 4}

    def test_config_file(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"mode": "binary", "thresholds": [0.5]}), encoding="utf-8")
        assert load_config_file(path) == {"mode": "binary", "thresholds": [0.5]}

    def test_config_file_errors(self, tmp_path):
        with pytest.raises(StorageError):
            load_config_file(tmp_path / "absent.json")
        (tmp_path / "bad.json").write_text("{not json", encoding="utf-8")
        with pytest.raises(InputError):
            load_config_file(tmp_path / "bad.json")
        (tmp_path / "list.json").write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(InputError):
            load_config_file(tmp_path / "list.json")


class TestBuildRunConfig:
    def test_defaults(self):
        cfg = build_run_config("gen", [Path("corpus")], {})
        assert cfg.maps.mode is MapMode.strong and cfg.maps.sigma == 1.0 and cfg.maps.bins == 3
        assert cfg.thresholds == [0.25, 0.30, 0.50, 0.75]
        assert cfg.inputs == [Path("corpus")]

    def test_flat_keys_land_in_sections(self):
        cfg = build_run_config("synth", [], {"wmax": 80.0, "gripper_wmax": 40.0, "jaw_length": 4.0,
                                             "kind": "smooth_l1", "image_size": 48, "count": 3})
        assert cfg.maps.w_max == 80.0
        assert cfg.gripper.w_max == 40.0 and cfg.gripper.jaw_length == 4.0
        assert cfg.synth.gripper == cfg.gripper and cfg.synth.image_size == 48
        assert cfg.loss.kind.value == "smooth_l1" and cfg.count == 3

    def test_unknown_key(self):
        with pytest.raises(InputError, match="frobnicate"):
            build_run_config("gen", [], {"frobnicate": 1})

    def test_threshold_csv_is_sorted(self):
        assert build_run_config("eval", [], {"thresholds": "0.5,0.25,0.5"}).thresholds == [0.25, 0.5]
        assert build_run_config("eval", [], {"thresholds": ""}).thresholds == []

    def test_threshold_out_of_range(self):
        with pytest.raises(ValidationError):
            build_run_config("eval", [], {"thresholds": "1.5"})
        with pytest.raises(InputError):
            parse_thresholds("0.2,abc")

    def test_bad_values(self):
        with pytest.raises(ValidationError):
            build_run_config("gen", [], {"sigma": 0})
        with pytest.raises(ValidationError):
            build_run_config("gen", [], {"mode": "fuzzy"})
        with pytest.raises(ValidationError):
            build_run_config("extract", [], {"top_k": 0})

    def test_gripper_range(self):
        with pytest.raises(ValidationError):
            GripperParams(w_min=5.0, w_max=5.0)

    def test_known_keys_cover_sections(self):
        keys = known_option_keys()
        assert {"wmax", "gripper_wmin", "positional", "overhang_fraction", "top_k"} <= set(keys)
        assert keys == sorted(keys)


class TestLogging:
    """structlog events rendered through python-json-logger."""

    def teardown_method(self):
        configure_logging("WARNING", json_logs=False)

    def test_json_line(self, capsys):
        configure_logging("INFO", json_logs=True)
        get_logger("graspmaps.tests").info("scene_loaded", scene_id="scene_00001", grasps=4)
        line = capsys.readouterr().err.strip().splitlines()[-1]
        record = json.loads(line)
        assert record["message"] == "scene_loaded"
        assert record["scene_id"] == "scene_00001" and record["grasps"] == 4
        assert record["levelname"] == "INFO"

    def test_level_filters(self, capsys):
        configure_logging("ERROR", json_logs=True)
        get_logger("graspmaps.tests").info("quiet")
        assert "quiet" not in capsys.readouterr().err

    def test_reconfigure_keeps_one_handler(self):
        configure_logging("INFO", json_logs=False)
        before = len(logging.getLogger().handlers)
        configure_logging("INFO", json_logs=True)
        assert len(logging.getLogger().handlers) == before

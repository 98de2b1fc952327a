# graspmaps/config.py
from __future__ import annotations

import json
import os
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from graspmaps.errors import InputError, StorageError

# Env defaults; CLI flags and --config files override these.
LOG_LEVEL = os.getenv("GRASPMAPS_LOG_LEVEL", "INFO")
LOG_JSON = os.getenv("GRASPMAPS_LOG_JSON", "0") not in ("", "0", "false", "False")
DEFAULT_JOBS = int(os.getenv("GRASPMAPS_JOBS", "1"))
DEFAULT_SEED = int(os.getenv("GRASPMAPS_SEED", "0"))

DEFAULT_THRESHOLDS = (0.25, 0.30, 0.50, 0.75)
REPORT_VERSION = 1


class MapMode(str, Enum):
    binary = "binary"
    soft = "soft"
    strong = "strong"


class SoftRule(str, Enum):
    # floor: Q = max(gaussian, soft_floor) inside the centre third
    floor = "floor"
    # literal_min: Q = min(gaussian, soft_floor), the displayed formula taken literally
    literal_min = "literal_min"


class LossKind(str, Enum):
    mse = "mse"
    smooth_l1 = "smooth_l1"


class Reduction(str, Enum):
    mean = "mean"
    sum = "sum"


class MapGenConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    mode: MapMode = MapMode.strong
    sigma: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    bins: int = Field(default=3, ge=1)
    w_max: float = Field(default=150.0, gt=0, allow_inf_nan=False)
    soft_floor: float = Field(default=0.9, gt=0, lt=1)
    soft_rule: SoftRule = SoftRule.floor


class GripperParams(BaseModel):
    """Parallel-plate gripper in pixel units."""

    model_config = ConfigDict(frozen=True)

    jaw_thickness: float = Field(default=2.0, gt=0, allow_inf_nan=False)
    jaw_length: float = Field(default=6.0, gt=0, allow_inf_nan=False)
    w_max: float = Field(default=150.0, gt=0, allow_inf_nan=False)
    w_min: float = Field(default=1.0, ge=0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _check_range(self) -> "GripperParams":
        if not self.w_min < self.w_max:
            raise ValueError(f"w_min ({self.w_min}) must be below w_max ({self.w_max})")
        return self


class LossConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: LossKind = LossKind.mse
    positional: bool = False
    reduction: Reduction = Reduction.mean


class SynthConfig(BaseModel):
    """Desk-scale synthetic corpus: one object per square image."""

    model_config = ConfigDict(frozen=True)

    image_size: int = Field(default=64, ge=32)
    min_grasps: int = Field(default=3, ge=1)
    max_grasps: int = Field(default=6, ge=1)
    # share of bar/L grasps centred near a free end with a long jaw size
    overhang_fraction: float = Field(default=0.5, ge=0, le=1)
    gripper: GripperParams = Field(default_factory=GripperParams)

    @model_validator(mode="after")
    def _check_counts(self) -> "SynthConfig":
        if self.min_grasps > self.max_grasps:
            raise ValueError("min_grasps must not exceed max_grasps")
        return self


class RunConfig(BaseModel):
    """Everything a CLI run needs, after flags and config files are merged."""

    model_config = ConfigDict(frozen=True)

    command: str
    inputs: List[Path] = Field(default_factory=list)
    out: Optional[Path] = None
    maps: MapGenConfig = Field(default_factory=MapGenConfig)
    gripper: GripperParams = Field(default_factory=GripperParams)
    loss: LossConfig = Field(default_factory=LossConfig)
    synth: SynthConfig = Field(default_factory=SynthConfig)
    thresholds: List[float] = Field(default_factory=lambda: list(DEFAULT_THRESHOLDS))
    jobs: int = Field(default=DEFAULT_JOBS, ge=1)
    seed: int = DEFAULT_SEED

    # extract
    top_k: int = Field(default=1, ge=1)
    min_separation: float = Field(default=0.0, ge=0, allow_inf_nan=False)
    smooth_sigma: Optional[float] = Field(default=None, gt=0, allow_inf_nan=False)
    # gen / viz
    heatmaps: bool = False
    colormap: str = "jet"
    raster_corpus: Optional[Path] = None
    # eval / oracle
    with_oracle: bool = False
    random_baseline: bool = False
    # synth
    count: int = Field(default=10, ge=0)

    @field_validator("thresholds")
    @classmethod
    def _check_thresholds(cls, value: List[float]) -> List[float]:
        for t in value:
            if not 0.0 < t < 1.0:
                raise ValueError(f"threshold {t} outside (0, 1)")
        return sorted(set(value))


def load_config_file(path: Path) -> Dict[str, Any]:
    """Read a JSON config file into a flat dict of option values."""
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise StorageError(f"cannot read config file {path}: {e}") from e
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as e:
        raise InputError(f"config file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise InputError(f"config file {path} must hold a JSON object")
    return data


def merge_options(file_values: Dict[str, Any], flag_values: Dict[str, Any]) -> Dict[str, Any]:
    """Flags win over file values; flags left at None fall through."""
    merged = dict(file_values)
    merged.update({k: v for k, v in flag_values.items() if v is not None})
    return merged


def parse_thresholds(csv: str) -> List[float]:
    try:
        return [float(part) for part in csv.split(",") if part.strip()]
    except ValueError as e:
        raise InputError(f"bad threshold list {csv!r}: {e}") from e


# flat option name (flag / config-file key) -> field of a nested config
_SECTION_KEYS: Dict[str, Dict[str, str]] = {
    "maps": {"mode": "mode", "sigma": "sigma", "bins": "bins", "wmax": "w_max",
             "soft_floor": "soft_floor", "soft_rule": "soft_rule"},
    "gripper": {"jaw_thickness": "jaw_thickness", "jaw_length": "jaw_length",
                "gripper_wmin": "w_min", "gripper_wmax": "w_max"},
    "loss": {"kind": "kind", "positional": "positional", "reduction": "reduction"},
    "synth": {"image_size": "image_size", "min_grasps": "min_grasps", "max_grasps": "max_grasps",
              "overhang_fraction": "overhang_fraction"},
}
_TOP_LEVEL_KEYS = {
    "out", "thresholds", "jobs", "seed", "top_k", "min_separation", "smooth_sigma",
    "heatmaps", "colormap", "raster_corpus", "with_oracle", "random_baseline", "count",
}


def known_option_keys() -> List[str]:
    keys = set(_TOP_LEVEL_KEYS)
    for mapping in _SECTION_KEYS.values():
        keys.update(mapping)
    return sorted(keys)


def build_run_config(command: str, inputs: List[Path], options: Dict[str, Any]) -> RunConfig:
    """
    Turn merged flat options into a validated RunConfig. Unknown keys are an
    input error; pydantic's ValidationError surfaces bad values.
    """
    unknown = sorted(set(options) - set(known_option_keys()))
    if unknown:
        raise InputError(f"unknown option(s): {', '.join(unknown)}")

    sections = {
        name: {field: options[key] for key, field in mapping.items() if key in options}
        for name, mapping in _SECTION_KEYS.items()
    }
    top = {key: options[key] for key in _TOP_LEVEL_KEYS if key in options}
    if isinstance(top.get("thresholds"), str):
        top["thresholds"] = parse_thresholds(top["thresholds"])

    gripper = GripperParams(**sections["gripper"])
    return RunConfig(
        command=command,
        inputs=list(inputs),
        maps=MapGenConfig(**sections["maps"]),
        gripper=gripper,
        loss=LossConfig(**sections["loss"]),
        synth=SynthConfig(**sections["synth"], gripper=gripper),
        **top,
    )

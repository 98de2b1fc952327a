# graspmaps/schemas.py
from __future__ import annotations

from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from graspmaps.config import REPORT_VERSION
from graspmaps.models import PixelMask
from graspmaps.utils.angles import degrees_to_grasp_angle, grasp_angle_to_degrees, normalize_angle


class GraspRectangle(BaseModel):
    """
    Oriented planar grasp in image pixels (x right, y down).
    width is the gripper opening along the grasp axis, height the jaw size across it.
    theta is kept in [-pi/2, pi/2).
    """

    model_config = ConfigDict(frozen=True)

    cx: float = Field(allow_inf_nan=False)
    cy: float = Field(allow_inf_nan=False)
    theta: float = Field(default=0.0, allow_inf_nan=False)
    width: float = Field(ge=0, allow_inf_nan=False)
    height: float = Field(ge=0, allow_inf_nan=False)

    @field_validator("theta")
    @classmethod
    def _wrap_theta(cls, value: float) -> float:
        return normalize_angle(value)

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def theta_deg(self) -> float:
        """Degrees that parse back to exactly this theta."""
        return grasp_angle_to_degrees(self.theta)

    @classmethod
    def from_degrees(cls, cx: float, cy: float, theta_deg: float, width: float, height: float) -> "GraspRectangle":
        return cls(cx=cx, cy=cy, theta=degrees_to_grasp_angle(theta_deg), width=width, height=height)


class GraspScene(BaseModel):
    """One image's annotation set plus optional rasters."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    scene_id: str
    image_h: int = Field(gt=0)
    image_w: int = Field(gt=0)
    grasps: List[GraspRectangle] = Field(default_factory=list)
    mask: Optional[PixelMask] = None
    depth: Optional[np.ndarray] = None
    rgb: Optional[np.ndarray] = None

    @model_validator(mode="after")
    def _check_contents(self) -> "GraspScene":
        for i, g in enumerate(self.grasps):
            if not (0.0 <= g.cx < self.image_w and 0.0 <= g.cy < self.image_h):
                raise ValueError(
                    f"grasp {i} centre ({g.cx}, {g.cy}) outside {self.image_w}x{self.image_h} image"
                )
        if self.mask is not None and (self.mask.height, self.mask.width) != (self.image_h, self.image_w):
            raise ValueError(
                f"mask is {self.mask.width}x{self.mask.height}, scene is {self.image_w}x{self.image_h}"
            )
        for label, raster in (("depth", self.depth), ("rgb", self.rgb)):
            if raster is not None and tuple(raster.shape[:2]) != (self.image_h, self.image_w):
                raise ValueError(f"{label} raster shape {raster.shape} does not match scene")
        return self

    @property
    def dims(self) -> Tuple[int, int]:
        return (self.image_h, self.image_w)


class AnnotationGrasp(BaseModel):
    """On-disk grasp: theta in degrees, Jacquard-style."""

    x: float = Field(allow_inf_nan=False)
    y: float = Field(allow_inf_nan=False)
    theta: float = Field(allow_inf_nan=False)
    opening: float = Field(gt=0, allow_inf_nan=False)
    jaw_size: float = Field(gt=0, allow_inf_nan=False)

    def to_rect(self) -> GraspRectangle:
        return GraspRectangle.from_degrees(self.x, self.y, self.theta, self.opening, self.jaw_size)

    @classmethod
    def from_rect(cls, rect: GraspRectangle) -> "AnnotationGrasp":
        return cls(x=rect.cx, y=rect.cy, theta=rect.theta_deg, opening=rect.width, jaw_size=rect.height)


class AnnotationRecord(BaseModel):
    """JSON mirror of an annotation file (grasps.json)."""

    scene_id: str
    image_h: int = Field(gt=0)
    image_w: int = Field(gt=0)
    grasps: List[AnnotationGrasp]

    def to_scene(self, mask: Optional[PixelMask] = None) -> GraspScene:
        return GraspScene(
            scene_id=self.scene_id,
            image_h=self.image_h,
            image_w=self.image_w,
            grasps=[g.to_rect() for g in self.grasps],
            mask=mask,
        )

    @classmethod
    def from_scene(cls, scene: GraspScene) -> "AnnotationRecord":
        return cls(
            scene_id=scene.scene_id,
            image_h=scene.image_h,
            image_w=scene.image_w,
            grasps=[AnnotationGrasp.from_rect(g) for g in scene.grasps],
        )


class DecodedGrasp(BaseModel):
    model_config = ConfigDict(frozen=True)

    rect: GraspRectangle
    quality: float
    bin: int = Field(ge=0)


class ScenePrediction(BaseModel):
    """What `extract` writes per scene and `eval`/`oracle` read back."""

    scene_id: str
    grasp: DecodedGrasp
    top_k: List[DecodedGrasp] = Field(default_factory=list)


class LossBreakdown(BaseModel):
    model_config = ConfigDict(frozen=True)

    total: float = Field(ge=0)
    per_channel: Dict[str, float]
    scale: int = Field(ge=1)


class SceneLoss(BaseModel):
    scene_id: str
    loss: LossBreakdown


class LossReport(BaseModel):
    report_version: int = REPORT_VERSION
    kind: str
    positional: bool
    reduction: str
    per_scene: List[SceneLoss]
    mean_total: float
    scene_count: int


def threshold_key(t: float) -> str:
    """0.25 -> "0.25"; thresholds off the percent grid keep full precision."""
    if abs(t * 100 - round(t * 100)) < 1e-9:
        return f"{t:.2f}"
    return repr(float(t))


class SceneEvalResult(BaseModel):
    scene_id: str
    best_iou: float = Field(ge=0, le=1)
    best_iou_raw: float = Field(ge=0, le=1)
    success_at: Dict[str, bool] = Field(default_factory=dict)


class EvalReport(BaseModel):
    report_version: int = REPORT_VERSION
    thresholds: List[float]
    per_scene: List[SceneEvalResult]
    success_rate: Dict[str, float]
    iou_avg: float = Field(ge=0, le=1)
    iou_avg_raw: float = Field(ge=0, le=1)
    scene_count: int = Field(ge=0)
    sgt_proxy_rate: Optional[float] = None


class GraspOutcome(str, Enum):
    success = "Success"
    jaw_collision = "JawCollision"
    miss = "Miss"
    out_of_bounds = "OutOfBounds"


class OracleSceneResult(BaseModel):
    scene_id: str
    outcome: GraspOutcome


class BaselineComparison(BaseModel):
    """Extracted-from-strong-maps rate against random binary-support placement."""

    strong_rate: float
    random_binary_rate: float
    seed: int
    scene_count: int

    @property
    def margin(self) -> float:
        return self.strong_rate - self.random_binary_rate


class OracleReport(BaseModel):
    report_version: int = REPORT_VERSION
    per_scene: List[OracleSceneResult]
    counts: Dict[str, int]
    success_rate: float = Field(ge=0, le=1)
    scene_count: int = Field(ge=0)
    baseline: Optional[BaselineComparison] = None

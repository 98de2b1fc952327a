# graspmaps/activities/evaluation.py
from __future__ import annotations

from pathlib import Path
from typing import List, Tuple

from graspmaps.config import GripperParams, LossConfig, MapGenConfig
from graspmaps.core.loss import compute_loss
from graspmaps.core.metrics import evaluate_scene
from graspmaps.core.oracle import baseline_trial, check_grasp
from graspmaps.dataset.tensors import load_tensor
from graspmaps.errors import MissingMaskError
from graspmaps.schemas import GraspOutcome, GraspRectangle, GraspScene, OracleSceneResult, SceneEvalResult, SceneLoss


def loss_scene_activity(scene_id: str, pred_path: Path, gt_path: Path, cfg: LossConfig) -> SceneLoss:
    """Loss between a predicted and a ground-truth tensor file."""
    return SceneLoss(scene_id=scene_id, loss=compute_loss(load_tensor(pred_path), load_tensor(gt_path), cfg))


def evaluate_scene_activity(scene: GraspScene, pred: GraspRectangle, thresholds: List[float]) -> SceneEvalResult:
    return evaluate_scene(scene.scene_id, pred, scene.grasps, thresholds)


def oracle_scene_activity(scene: GraspScene, pred: GraspRectangle, gp: GripperParams) -> OracleSceneResult:
    if scene.mask is None:
        raise MissingMaskError([scene.scene_id])
    return OracleSceneResult(scene_id=scene.scene_id, outcome=check_grasp(scene.mask, pred, gp))


def baseline_scene_activity(scene: GraspScene, gp: GripperParams, seed: int,
                            maps: MapGenConfig) -> Tuple[GraspOutcome, GraspOutcome]:
    """Strong-map pick against a random binary-support pick on one scene."""
    return baseline_trial(scene, gp, seed, maps)

# graspmaps/dataset/corpus.py
"""
Corpus layout, one directory per scene:

    <root>/<scene_id>/grasps.json   annotation record (preferred)
    <root>/<scene_id>/grasps.txt    text annotations; image size taken from mask.png
    <root>/<scene_id>/mask.png      occupancy mask (needed by the oracle)
    <root>/<scene_id>/depth.tiff    optional
    <root>/<scene_id>/rgb.png       optional

Predictions live flat in a directory as <scene_id>.grasp.json.
"""
from __future__ import annotations

from pathlib import Path
from typing import Dict, List

from graspmaps.dataset.annotations import (
    read_annotation_json,
    read_annotation_text,
    record_to_scene,
    write_annotations,
)
from graspmaps.dataset.files import read_text, write_model
from graspmaps.dataset.images import read_depth, read_mask, read_rgb, write_mask
from graspmaps.errors import AnnotationParseError, InputError, StorageError
from graspmaps.schemas import AnnotationRecord, GraspScene, ScenePrediction

ANNOTATION_JSON = "grasps.json"
ANNOTATION_TEXT = "grasps.txt"
MASK_FILE = "mask.png"
DEPTH_FILE = "depth.tiff"
RGB_FILE = "rgb.png"
PREDICTION_SUFFIX = ".grasp.json"


def list_scene_dirs(root: Path) -> List[Path]:
    root = Path(root)
    if not root.is_dir():
        raise StorageError(f"corpus directory {root} does not exist")
    return sorted(
        p for p in root.iterdir()
        if p.is_dir() and ((p / ANNOTATION_JSON).is_file() or (p / ANNOTATION_TEXT).is_file())
    )


def annotation_path(scene_dir: Path) -> Path:
    json_path = Path(scene_dir) / ANNOTATION_JSON
    return json_path if json_path.is_file() else Path(scene_dir) / ANNOTATION_TEXT


def load_scene(scene_dir: Path, with_rasters: bool = False) -> GraspScene:
    scene_dir = Path(scene_dir)
    scene_id = scene_dir.name
    mask_path = scene_dir / MASK_FILE
    mask = read_mask(mask_path) if mask_path.is_file() else None

    json_path = scene_dir / ANNOTATION_JSON
    if json_path.is_file():
        record = read_annotation_json(json_path)
        if record.scene_id != scene_id:
            raise AnnotationParseError(f"scene_id {record.scene_id!r} does not match directory", path=str(json_path))
        scene = record_to_scene(record, mask, path=str(json_path))
    else:
        text_path = scene_dir / ANNOTATION_TEXT
        if mask is None:
            raise AnnotationParseError(f"{ANNOTATION_TEXT} needs {MASK_FILE} for the image size", path=str(text_path))
        scene = read_annotation_text(
            text_path, scene_id=scene_id, image_h=mask.height, image_w=mask.width, mask=mask
        )

    if with_rasters:
        extra = {}
        if (scene_dir / DEPTH_FILE).is_file():
            extra["depth"] = read_depth(scene_dir / DEPTH_FILE)
        if (scene_dir / RGB_FILE).is_file():
            extra["rgb"] = read_rgb(scene_dir / RGB_FILE)
        if extra:
            scene = GraspScene(**{**dict(scene), **extra})
    return scene


def write_scene(root: Path, scene: GraspScene) -> Path:
    """Write annotations (JSON record and text form) plus the mask, if any."""
    scene_dir = Path(root) / scene.scene_id
    write_model(scene_dir / ANNOTATION_JSON, AnnotationRecord.from_scene(scene))
    write_annotations(scene_dir / ANNOTATION_TEXT, scene)
    if scene.mask is not None:
        write_mask(scene_dir / MASK_FILE, scene.mask)
    return scene_dir


def prediction_path(pred_dir: Path, scene_id: str) -> Path:
    return Path(pred_dir) / f"{scene_id}{PREDICTION_SUFFIX}"


def write_prediction(pred_dir: Path, prediction: ScenePrediction) -> Path:
    path = prediction_path(pred_dir, prediction.scene_id)
    write_model(path, prediction)
    return path


def load_predictions(pred_dir: Path) -> Dict[str, ScenePrediction]:
    pred_dir = Path(pred_dir)
    if not pred_dir.is_dir():
        raise StorageError(f"prediction directory {pred_dir} does not exist")
    out: Dict[str, ScenePrediction] = {}
    for path in sorted(pred_dir.glob(f"*{PREDICTION_SUFFIX}")):
        try:
            pred = ScenePrediction.model_validate_json(read_text(path))
        except ValueError as e:
            raise InputError(f"{path}: not a valid prediction file: {e}") from e
        out[pred.scene_id] = pred
    return out

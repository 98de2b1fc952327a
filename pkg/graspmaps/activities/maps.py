# graspmaps/activities/maps.py
from __future__ import annotations

from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel

from graspmaps.config import MapGenConfig
from graspmaps.core.extraction import extract_grasp, extract_top_k
from graspmaps.core.ground_truth import generate_maps
from graspmaps.dataset.corpus import load_scene, write_prediction
from graspmaps.dataset.files import write_bytes
from graspmaps.dataset.images import preprocess_depth, preprocess_rgb, render_heatmap, render_rgb
from graspmaps.dataset.tensors import load_tensor, save_tensor, scene_id_of, tensor_path
from graspmaps.logging import get_logger
from graspmaps.models import GraspMapStack
from graspmaps.schemas import GraspScene, ScenePrediction

logger = get_logger(__name__)

HEATMAP_DIR = "heatmaps"

# display range per channel
CHANNEL_RANGES = {"q": (0.0, 1.0), "cos": (-1.0, 1.0), "sin": (-1.0, 1.0), "width": (0.0, 1.0)}


class GenSummary(BaseModel):
    scene_id: str
    path: str
    q_max: float
    support_pixels: int


def write_heatmaps(stack: GraspMapStack, scene_id: str, out_dir: Path, colormap: str = "jet",
                   channels: tuple = ("q",)) -> List[Path]:
    written = []
    for name in channels:
        vmin, vmax = CHANNEL_RANGES[name]
        raster = getattr(stack, name)
        for b in range(stack.bins):
            path = Path(out_dir) / f"{scene_id}_{name}_b{b}.png"
            write_bytes(path, render_heatmap(raster[b], colormap, vmin, vmax))
            written.append(path)
    return written


def generate_scene_activity(scene: GraspScene, cfg: MapGenConfig, out_dir: Path,
                            heatmaps: bool = False, colormap: str = "jet") -> GenSummary:
    """Generate ground-truth maps for one scene and store them as <scene_id>.gmap."""
    stack = generate_maps(scene, cfg)
    path = tensor_path(out_dir, scene.scene_id)
    save_tensor(path, stack)
    if heatmaps:
        write_heatmaps(stack, scene.scene_id, Path(out_dir) / HEATMAP_DIR, colormap)
    return GenSummary(
        scene_id=scene.scene_id,
        path=str(path),
        q_max=float(stack.q.max()),
        support_pixels=int((stack.q > 0).sum()),
    )


def extract_scene_activity(gmap_path: Path, out_dir: Path, w_max: float, top_k: int = 1,
                           min_separation: float = 0.0, smooth_sigma: Optional[float] = None) -> ScenePrediction:
    """Decode the best grasp (and optionally the top k) from one tensor file."""
    scene_id = scene_id_of(gmap_path)
    stack = load_tensor(gmap_path)
    best = extract_grasp(stack, w_max, smooth_sigma=smooth_sigma)
    ranked = extract_top_k(stack, w_max, top_k, min_separation, smooth_sigma) if top_k > 1 else []
    prediction = ScenePrediction(scene_id=scene_id, grasp=best, top_k=ranked)
    write_prediction(out_dir, prediction)
    logger.debug("grasp_extracted", scene_id=scene_id, quality=best.quality, bin=best.bin)
    return prediction


def render_scene_activity(gmap_path: Path, out_dir: Path, colormap: str = "jet") -> int:
    """Heatmaps for every channel and bin of one tensor file."""
    scene_id = scene_id_of(gmap_path)
    stack = load_tensor(gmap_path)
    return len(write_heatmaps(stack, scene_id, out_dir, colormap, channels=tuple(CHANNEL_RANGES)))


def render_inputs_activity(scene_dir: Path, out_dir: Path, colormap: str = "jet") -> int:
    """
    Preprocessed network inputs of one scene directory: depth as a heatmap over
    [-1, 1], rgb as a mean-subtracted colour image. Scenes without rasters write nothing.
    """
    scene = load_scene(scene_dir, with_rasters=True)
    written = 0
    if scene.depth is not None:
        write_bytes(Path(out_dir) / f"{scene.scene_id}_depth_input.png",
                    render_heatmap(preprocess_depth(scene.depth), colormap, -1.0, 1.0))
        written += 1
    if scene.rgb is not None:
        write_bytes(Path(out_dir) / f"{scene.scene_id}_rgb_input.png", render_rgb(preprocess_rgb(scene.rgb)))
        written += 1
    logger.debug("inputs_rendered", scene_id=scene.scene_id, images=written)
    return written

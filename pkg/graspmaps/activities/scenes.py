# graspmaps/activities/scenes.py
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from graspmaps.config import SynthConfig
from graspmaps.core.synthesis import synthesize_scene
from graspmaps.dataset.corpus import annotation_path, load_scene, write_scene
from graspmaps.errors import InputError
from graspmaps.logging import get_logger
from graspmaps.schemas import GraspScene

logger = get_logger(__name__)


@dataclass(frozen=True)
class SceneLoad:
    scene_id: str
    path: str
    scene: Optional[GraspScene] = None
    error: Optional[str] = None


def load_scene_activity(scene_dir: Path) -> SceneLoad:
    """Load one scene directory. Bad annotations are reported, not raised; I/O errors still raise."""
    path = str(annotation_path(scene_dir))
    try:
        scene = load_scene(scene_dir)
    except (InputError, ValidationError) as e:
        logger.warning("scene_rejected", scene_id=Path(scene_dir).name, path=path, error=str(e))
        return SceneLoad(scene_id=Path(scene_dir).name, path=path, error=str(e))
    return SceneLoad(scene_id=scene.scene_id, path=path, scene=scene)


def synthesize_scene_activity(index: int, seed: int, cfg: SynthConfig, out_dir: Path) -> str:
    """Build synthetic scene `index` and write it under out_dir."""
    scene = synthesize_scene(index, seed, cfg)
    write_scene(out_dir, scene)
    return scene.scene_id

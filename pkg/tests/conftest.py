"""
Shared fixtures: small hand-built scenes, a seeded synthetic corpus and
temporary corpus directories.
"""
from pathlib import Path
from typing import List

import numpy as np
import pytest

from graspmaps.config import GripperParams, SynthConfig
from graspmaps.core.synthesis import synthesize_corpus
from graspmaps.dataset.corpus import write_scene
from graspmaps.models import PixelMask
from graspmaps.schemas import GraspRectangle, GraspScene


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def gripper() -> GripperParams:
    return GripperParams()


@pytest.fixture
def square_mask() -> PixelMask:
    """20x20 mask with a 6x6 filled square in the middle (pixels 7..12)."""
    data = np.zeros((20, 20), dtype=bool)
    data[7:13, 7:13] = True
    return PixelMask(data)


@pytest.fixture
def square_scene(square_mask: PixelMask) -> GraspScene:
    return GraspScene(
        scene_id="square",
        image_h=20,
        image_w=20,
        grasps=[GraspRectangle(cx=10.0, cy=10.0, theta=0.0, width=10.0, height=5.0)],
        mask=square_mask,
    )


@pytest.fixture(scope="session")
def synthetic_scenes() -> List[GraspScene]:
    return synthesize_corpus(12, seed=7, cfg=SynthConfig())


@pytest.fixture
def corpus_dir(tmp_path: Path, synthetic_scenes: List[GraspScene]) -> Path:
    root = tmp_path / "corpus"
    for scene in synthetic_scenes[:6]:
        write_scene(root, scene)
    return root

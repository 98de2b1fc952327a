# graspmaps/core/synthesis.py
"""
Seeded synthetic scenes: a single bar, L or ring on an empty background,
annotated with antipodal grasps that the 2D oracle accepts.

Grasp centres sit on pixel centres. Some bar/L grasps are placed near a free
end with a jaw size longer than the opening, so the centre third of their
rectangle hangs past the object: a binary map then marks pixels off the
object as valid centres.
"""
from __future__ import annotations

import math
from typing import Callable, List, Optional, Tuple

import numpy as np

from graspmaps.config import SynthConfig
from graspmaps.core.geometry import rasterize_rect
from graspmaps.core.oracle import check_grasp
from graspmaps.errors import SynthesisError
from graspmaps.logging import get_logger
from graspmaps.models import PixelMask
from graspmaps.schemas import GraspOutcome, GraspRectangle, GraspScene
from graspmaps.utils.angles import degrees_to_grasp_angle

logger = get_logger(__name__)

SHAPES = ("bar", "L", "ring")
MAX_SHAPE_TRIES = 20
ATTEMPTS_PER_GRASP = 40

# proposes a grasp, or None when the draw is unusable
Proposal = Callable[[np.random.Generator, bool], Optional[GraspRectangle]]


def scene_id_for(index: int) -> str:
    return f"scene_{index:05d}"


def scene_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream per scene, so output does not depend on worker order."""
    return np.random.default_rng([seed, index])


def _snap(x: float, y: float) -> Tuple[float, float]:
    return math.floor(x) + 0.5, math.floor(y) + 0.5


def _angle(theta: float) -> float:
    """Grasp angle as read back from its degree form, so written scenes reload unchanged."""
    return degrees_to_grasp_angle(math.degrees(theta))


def _opening(rng: np.random.Generator, thickness: float) -> float:
    return float(thickness + 2.0 * rng.uniform(3.0, 5.0))


def _jaw_size(rng: np.random.Generator, opening: float, overhang: bool) -> float:
    if overhang:
        # stays under 2x the opening so a half-jaw decode still overlaps by IoU > 0.25
        return float(opening * rng.uniform(1.3, 1.9))
    return float(opening * rng.uniform(0.4, 0.6))


def _bar_proposal(cx: float, cy: float, phi: float, length: float, thickness: float,
                  s_lo: float, size: int) -> Proposal:
    """
    Grasps across a bar whose axis starts at (cx, cy) - s_lo along phi direction.
    Positions are measured along the bar axis from (cx, cy).
    """
    dx, dy = math.cos(phi), math.sin(phi)
    half = length / 2.0

    def propose(rng: np.random.Generator, overhang: bool) -> Optional[GraspRectangle]:
        if overhang:
            s = half - rng.uniform(-1.0, 2.0)
        else:
            lo, hi = -half + s_lo, half - 4.0
            if hi <= lo:
                return None
            s = rng.uniform(lo, hi)
        x, y = _snap(cx + s * dx, cy + s * dy)
        if not (0 <= x < size and 0 <= y < size):
            return None
        opening = _opening(rng, thickness)
        return GraspRectangle(cx=x, cy=y, theta=_angle(phi + math.pi / 2), width=opening,
                              height=_jaw_size(rng, opening, overhang))

    return propose


def _make_bar(rng: np.random.Generator, size: int) -> Tuple[PixelMask, List[Proposal]]:
    length = float(rng.integers(24, 41))
    thickness = float(rng.integers(4, 9))
    phi = float(rng.uniform(-math.pi / 2, math.pi / 2))
    cx = size / 2 + float(rng.uniform(-4, 4))
    cy = size / 2 + float(rng.uniform(-4, 4))
    body = GraspRectangle(cx=cx, cy=cy, theta=phi, width=length, height=thickness)
    mask = rasterize_rect(body, (size, size))
    # grasps may sit near either end; mirror the axis for the far end
    proposals = [
        _bar_proposal(cx, cy, phi, length, thickness, 4.0, size),
        _bar_proposal(cx, cy, phi + math.pi, length, thickness, 4.0, size),
    ]
    return mask, proposals


def _make_l(rng: np.random.Generator, size: int) -> Tuple[PixelMask, List[Proposal]]:
    thickness = float(rng.integers(4, 8))
    phi = float(rng.uniform(-math.pi, math.pi))
    corner_x = size / 2 + float(rng.uniform(-3, 3))
    corner_y = size / 2 + float(rng.uniform(-3, 3))
    mask = PixelMask.empty(size, size)
    proposals: List[Proposal] = []
    for turn in (0.0, math.pi / 2):
        direction = phi + turn
        arm = float(rng.integers(16, 25))
        dx, dy = math.cos(direction), math.sin(direction)
        # arm covers [-thickness/2, arm] along its direction so the corner is filled
        length = arm + thickness / 2.0
        mid = (arm - thickness / 2.0) / 2.0
        cx, cy = corner_x + mid * dx, corner_y + mid * dy
        body = GraspRectangle(cx=cx, cy=cy, theta=direction, width=length, height=thickness)
        mask = mask | rasterize_rect(body, (size, size))
        # keep grasps clear of the corner: start thickness + 4 px out from it
        s_lo = thickness / 2.0 + thickness + 4.0
        proposals.append(_bar_proposal(cx, cy, direction, length, thickness, s_lo, size))
    return mask, proposals


def _make_ring(rng: np.random.Generator, size: int) -> Tuple[PixelMask, List[Proposal]]:
    outer = float(rng.uniform(13.0, 16.0))
    wall = float(rng.uniform(4.0, 5.0))
    inner = outer - wall
    cx = size / 2 + float(rng.uniform(-3, 3))
    cy = size / 2 + float(rng.uniform(-3, 3))
    ys, xs = np.mgrid[0:size, 0:size] + 0.5
    dist = np.hypot(xs - cx, ys - cy)
    mask = PixelMask((dist >= inner) & (dist < outer))
    mid = (inner + outer) / 2.0

    def propose(rng: np.random.Generator, overhang: bool) -> Optional[GraspRectangle]:
        alpha = float(rng.uniform(-math.pi, math.pi))
        x, y = _snap(cx + mid * math.cos(alpha), cy + mid * math.sin(alpha))
        opening = _opening(rng, wall)
        return GraspRectangle(cx=x, cy=y, theta=_angle(alpha), width=opening,
                              height=_jaw_size(rng, opening, False))

    return mask, [propose]


_MAKERS = {"bar": _make_bar, "L": _make_l, "ring": _make_ring}


def synthesize_scene(index: int, seed: int, cfg: SynthConfig) -> GraspScene:
    rng = scene_rng(seed, index)
    size = cfg.image_size
    for _ in range(MAX_SHAPE_TRIES):
        shape = SHAPES[int(rng.integers(len(SHAPES)))]
        mask, proposals = _MAKERS[shape](rng, size)
        target = int(rng.integers(cfg.min_grasps, cfg.max_grasps + 1))
        grasps: List[GraspRectangle] = []
        for _ in range(target * ATTEMPTS_PER_GRASP):
            if len(grasps) >= target:
                break
            propose = proposals[int(rng.integers(len(proposals)))]
            overhang = shape != "ring" and bool(rng.random() < cfg.overhang_fraction)
            g = propose(rng, overhang)
            if g is None:
                continue
            if check_grasp(mask, g, cfg.gripper) is GraspOutcome.success:
                grasps.append(g)
        if len(grasps) >= cfg.min_grasps:
            logger.debug("scene_synthesized", scene_id=scene_id_for(index), shape=shape, grasps=len(grasps))
            return GraspScene(scene_id=scene_id_for(index), image_h=size, image_w=size, grasps=grasps, mask=mask)
    raise SynthesisError(f"could not place {cfg.min_grasps} valid grasps for scene {index} (seed {seed})")


def synthesize_corpus(n: int, seed: int, cfg: SynthConfig) -> List[GraspScene]:
    return [synthesize_scene(i, seed, cfg) for i in range(n)]

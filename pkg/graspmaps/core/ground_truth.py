# graspmaps/core/ground_truth.py
"""
Ground-truth grasp maps from annotated scenes.

Binary maps mark the centre third of every rectangle with 1. The Gaussian
modes weight those pixels by exp(-d^2 / 2 sigma^2), d being the distance from
the pixel centre to the grasp centre; `soft` keeps a floor of `soft_floor`
inside the centre third, `strong` does not.
"""
from __future__ import annotations

import math
from typing import List, Tuple

import numpy as np

from graspmaps.config import MapGenConfig, MapMode, SoftRule
from graspmaps.core.geometry import center_third, contains_points, pixel_window, window_centres
from graspmaps.errors import EmptyAnnotationError
from graspmaps.logging import get_logger
from graspmaps.models import GraspMapStack, PixelMask
from graspmaps.schemas import GraspScene
from graspmaps.utils.angles import HALF_PI

logger = get_logger(__name__)

# Smallest normal float32. Centre-third pixels never drop below it, so every
# mode (and its float32 tensor file) keeps the same support.
QUALITY_TINY = float(np.finfo(np.float32).tiny)

# Angles within this fraction of a bin from a boundary land on the upper bin.
BIN_SNAP = 1e-9


def encode_angle(theta: float) -> Tuple[float, float]:
    return math.cos(2.0 * theta), math.sin(2.0 * theta)


def assign_bin(theta: float, n: int) -> int:
    """Left-closed bins of width pi/n over [-pi/2, pi/2)."""
    pos = (theta + HALF_PI) / (math.pi / n)
    return min(max(math.floor(pos + BIN_SNAP), 0), n - 1)


def _gaussian_ratio(d: np.ndarray | float, sigma: float) -> np.ndarray | float:
    return np.exp(-(np.square(d)) / (2.0 * sigma * sigma))


def quality_field(d: np.ndarray, delta: np.ndarray, cfg: MapGenConfig) -> np.ndarray:
    """Vectorised pixel_quality over distance and centre-third indicator arrays."""
    delta = np.asarray(delta, dtype=bool)
    if cfg.mode is MapMode.binary:
        return delta.astype(np.float64)

    ratio = _gaussian_ratio(np.asarray(d, dtype=np.float64), cfg.sigma)
    if cfg.mode is MapMode.soft:
        if cfg.soft_rule is SoftRule.floor:
            ratio = np.maximum(ratio, cfg.soft_floor)
        else:
            ratio = np.minimum(ratio, cfg.soft_floor)
    ratio = np.maximum(ratio, QUALITY_TINY)
    return np.where(delta, ratio, 0.0)


def pixel_quality(d: float, in_center_third: bool, cfg: MapGenConfig) -> float:
    return float(quality_field(np.array(d, dtype=np.float64), np.array(in_center_third), cfg))


def generate_maps(scene: GraspScene, cfg: MapGenConfig) -> GraspMapStack:
    """
    Per bin, Q is the max over that bin's grasps of pixel_quality. The angle and
    width channels come from the grasp giving that max; ties go to the smaller
    width, then to the earlier annotation.
    """
    if not scene.grasps:
        raise EmptyAnnotationError(f"scene {scene.scene_id} has no grasps")

    n = cfg.bins
    h, w = scene.dims
    best_q = np.full((n, h, w), -1.0)
    best_width = np.full((n, h, w), np.inf)
    cos_map = np.zeros((n, h, w))
    sin_map = np.zeros((n, h, w))
    width_map = np.zeros((n, h, w))

    for g in scene.grasps:
        third = center_third(g)
        window = pixel_window(third, (h, w))
        if window is None:
            continue
        rows, cols = window
        xs, ys = window_centres(rows, cols)
        delta = contains_points(third, xs, ys)
        if not delta.any():
            continue

        b = assign_bin(g.theta, n)
        qg = quality_field(np.hypot(xs - g.cx, ys - g.cy), delta, cfg)
        bq = best_q[b, rows, cols]
        bw = best_width[b, rows, cols]
        take = delta & ((qg > bq) | ((qg == bq) & (g.width < bw)))
        if not take.any():
            continue

        c2, s2 = encode_angle(g.theta)
        bq[take] = qg[take]
        bw[take] = g.width
        cos_map[b, rows, cols][take] = c2
        sin_map[b, rows, cols][take] = s2
        width_map[b, rows, cols][take] = min(g.width, cfg.w_max) / cfg.w_max

    q_map = np.where(best_q > 0.0, best_q, 0.0)
    logger.debug(
        "maps_generated",
        scene_id=scene.scene_id,
        mode=cfg.mode.value,
        bins=n,
        grasps=len(scene.grasps),
        support=int((q_map > 0).sum()),
    )
    return GraspMapStack(q=q_map, cos=cos_map, sin=sin_map, width=width_map)


def support(stack: GraspMapStack) -> List[PixelMask]:
    return [PixelMask(stack.q[b] > 0.0) for b in range(stack.bins)]


def union_support(stack: GraspMapStack) -> PixelMask:
    return PixelMask((stack.q > 0.0).any(axis=0))

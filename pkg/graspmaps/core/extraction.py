# graspmaps/core/extraction.py
from __future__ import annotations

import math
from typing import List, Optional

import numpy as np
from scipy import ndimage

from graspmaps.errors import NoGraspError, UndefinedAngleError
from graspmaps.models import GraspMapStack
from graspmaps.schemas import DecodedGrasp, GraspRectangle
from graspmaps.utils.angles import normalize_angle

# jaw size used at test time is half the decoded opening
HALF_JAW = 0.5


def decode_angle(cos_comp: float, sin_comp: float) -> float:
    if cos_comp == 0.0 and sin_comp == 0.0:
        raise UndefinedAngleError("angle undefined for cos = sin = 0")
    return normalize_angle(math.atan2(sin_comp, cos_comp) / 2.0)


def _quality_for_argmax(stack: GraspMapStack, smooth_sigma: Optional[float]) -> np.ndarray:
    if not smooth_sigma:
        return stack.q
    # smooth each bin independently; bins are separate angle hypotheses
    return np.stack([ndimage.gaussian_filter(stack.q[b], smooth_sigma, mode="nearest") for b in range(stack.bins)])


def decode_at(stack: GraspMapStack, b: int, i: int, j: int, w_max: float) -> DecodedGrasp:
    """Grasp read from bin b at pixel (row i, column j)."""
    width = max(float(stack.width[b, i, j]), 0.0) * w_max
    rect = GraspRectangle(
        cx=j + 0.5,
        cy=i + 0.5,
        theta=decode_angle(float(stack.cos[b, i, j]), float(stack.sin[b, i, j])),
        width=width,
        height=width * HALF_JAW,
    )
    return DecodedGrasp(rect=rect, quality=float(stack.q[b, i, j]), bin=b)


def extract_grasp(stack: GraspMapStack, w_max: float, smooth_sigma: Optional[float] = None) -> DecodedGrasp:
    """
    Grasp at the global Q maximum over all bins. np.argmax keeps the first
    maximum, i.e. lowest bin then row-major pixel order.
    """
    if stack.q.size == 0:
        raise NoGraspError("empty grasp map stack")
    q = _quality_for_argmax(stack, smooth_sigma)
    flat = int(np.argmax(q))
    b, i, j = np.unravel_index(flat, q.shape)
    if not q[b, i, j] > 0.0:
        raise NoGraspError("quality map has no positive pixel")
    return decode_at(stack, int(b), int(i), int(j), w_max)


def extract_top_k(
    stack: GraspMapStack,
    w_max: float,
    k: int,
    min_separation: float = 0.0,
    smooth_sigma: Optional[float] = None,
) -> List[DecodedGrasp]:
    """
    Greedy non-maximum suppression by descending Q. Accepted centres are at
    least `min_separation` pixels apart, across bins as well.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if min_separation < 0:
        raise ValueError("min_separation must be >= 0")

    q = _quality_for_argmax(stack, smooth_sigma)
    flat = q.ravel()
    order = np.argsort(-flat, kind="stable")
    order = order[flat[order] > 0.0]
    if order.size == 0:
        return []

    b_idx, i_idx, j_idx = np.unravel_index(order, q.shape)
    xs = j_idx + 0.5
    ys = i_idx + 0.5
    alive = np.ones(order.size, dtype=bool)
    sep2 = float(min_separation) ** 2

    picked: List[DecodedGrasp] = []
    while len(picked) < k:
        remaining = np.flatnonzero(alive)
        if remaining.size == 0:
            break
        n = remaining[0]
        picked.append(decode_at(stack, int(b_idx[n]), int(i_idx[n]), int(j_idx[n]), w_max))
        alive[n] = False
        d2 = (xs - xs[n]) ** 2 + (ys - ys[n]) ** 2
        alive &= d2 >= sep2
    return picked


def sample_support_grasp(stack: GraspMapStack, w_max: float, rng: np.random.Generator) -> DecodedGrasp:
    """Grasp read at a (bin, pixel) drawn uniformly from the positive-Q support."""
    positive = np.flatnonzero(stack.q.ravel() > 0.0)
    if positive.size == 0:
        raise NoGraspError("quality map has no positive pixel")
    pick = int(positive[rng.integers(positive.size)])
    b, i, j = np.unravel_index(pick, stack.q.shape)
    return decode_at(stack, int(b), int(i), int(j), w_max)

# graspmaps/core/geometry.py
"""
Oriented grasp-rectangle primitives.

Coordinates are image pixels with x to the right and y down; pixel (i, j)
covers the square [j, j+1) x [i, i+1) and is sampled at its centre
(j + 0.5, i + 0.5).
"""
from __future__ import annotations

import math
from typing import List, Sequence, Tuple

import numpy as np

from graspmaps.models import PixelMask
from graspmaps.schemas import GraspRectangle

Point = Tuple[float, float]

# slack for touching-but-not-overlapping tests
OVERLAP_EPS = 1e-9


def axes(r: GraspRectangle) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """Unit grasp axis u (opening direction) and jaw axis v."""
    c, s = math.cos(r.theta), math.sin(r.theta)
    return (c, s), (-s, c)


def rect_corners(r: GraspRectangle) -> np.ndarray:
    """Four corners, counter-clockwise (positive shoelace area), shape (4, 2)."""
    (ux, uy), (vx, vy) = axes(r)
    hw, hh = r.width / 2.0, r.height / 2.0
    return np.array(
        [
            (r.cx - hw * ux - hh * vx, r.cy - hw * uy - hh * vy),
            (r.cx + hw * ux - hh * vx, r.cy + hw * uy - hh * vy),
            (r.cx + hw * ux + hh * vx, r.cy + hw * uy + hh * vy),
            (r.cx - hw * ux + hh * vx, r.cy - hw * uy + hh * vy),
        ],
        dtype=np.float64,
    )


def center_third(r: GraspRectangle) -> GraspRectangle:
    return r.model_copy(update={"width": r.width / 3.0})


def polygon_area(poly: Sequence[Point]) -> float:
    n = len(poly)
    if n < 3:
        return 0.0
    acc = 0.0
    for k in range(n):
        x0, y0 = poly[k]
        x1, y1 = poly[(k + 1) % n]
        acc += x0 * y1 - x1 * y0
    return abs(acc) / 2.0


def clip_polygon(subject: Sequence[Point], clip: Sequence[Point]) -> List[Point]:
    """
    Sutherland-Hodgman clipping of `subject` by the convex, counter-clockwise
    polygon `clip`. Returns the (possibly empty) intersection polygon.
    """
    output: List[Point] = list(subject)
    if not output or not clip:
        return []

    cp1 = clip[-1]
    for cp2 in clip:
        if not output:
            return []
        ex, ey = cp2[0] - cp1[0], cp2[1] - cp1[1]

        def side(p: Point) -> float:
            return ex * (p[1] - cp1[1]) - ey * (p[0] - cp1[0])

        inputs, output = output, []
        s = inputs[-1]
        s_side = side(s)
        for e in inputs:
            e_side = side(e)
            if e_side >= 0:
                if s_side < 0:
                    output.append(_crossing(s, e, s_side, e_side))
                output.append(e)
            elif s_side >= 0:
                output.append(_crossing(s, e, s_side, e_side))
            s, s_side = e, e_side
        cp1 = cp2
    return output


def _crossing(s: Point, e: Point, s_side: float, e_side: float) -> Point:
    t = s_side / (s_side - e_side)
    return (s[0] + t * (e[0] - s[0]), s[1] + t * (e[1] - s[1]))


def _rect_key(r: GraspRectangle) -> Tuple[float, ...]:
    return (r.cx, r.cy, r.theta, r.width, r.height)


def rect_iou(a: GraspRectangle, b: GraspRectangle) -> float:
    """Exact intersection-over-union of two oriented rectangles."""
    area_a, area_b = a.area, b.area
    if area_a <= 0.0 or area_b <= 0.0:
        return 0.0
    # fixed argument order keeps the result bit-identical under swapping
    if _rect_key(b) < _rect_key(a):
        a, b = b, a
        area_a, area_b = area_b, area_a
    subject = [tuple(p) for p in rect_corners(a)]
    clipper = [tuple(p) for p in rect_corners(b)]
    inter = polygon_area(clip_polygon(subject, clipper))
    union = area_a + area_b - inter
    if union <= 0.0:
        return 0.0
    return min(max(inter / union, 0.0), 1.0)


def angle_offset(a: float, b: float) -> float:
    """Smallest angle between two grasp orientations, in degrees, within [0, 90]."""
    d = math.fmod(abs(a - b), math.pi)
    d = min(d, math.pi - d)
    return min(max(math.degrees(d), 0.0), 90.0)


def contains_points(r: GraspRectangle, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Half-open membership: -w/2 <= s < w/2 and -h/2 <= t < h/2 in the rectangle frame."""
    (ux, uy), (vx, vy) = axes(r)
    dx = xs - r.cx
    dy = ys - r.cy
    s = dx * ux + dy * uy
    t = dx * vx + dy * vy
    hw, hh = r.width / 2.0, r.height / 2.0
    return (s >= -hw) & (s < hw) & (t >= -hh) & (t < hh)


def pixel_window(r: GraspRectangle, dims: Tuple[int, int], margin: float = 0.0) -> Tuple[slice, slice] | None:
    """Row/column slices of the pixels whose centres may touch `r`, or None if off-image."""
    h, w = dims
    corners = rect_corners(r)
    x_min, y_min = corners.min(axis=0) - margin
    x_max, y_max = corners.max(axis=0) + margin
    j0 = max(0, math.floor(x_min - 0.5))
    j1 = min(w - 1, math.ceil(x_max - 0.5))
    i0 = max(0, math.floor(y_min - 0.5))
    i1 = min(h - 1, math.ceil(y_max - 0.5))
    if j0 > j1 or i0 > i1:
        return None
    return slice(i0, i1 + 1), slice(j0, j1 + 1)


def window_centres(rows: slice, cols: slice) -> Tuple[np.ndarray, np.ndarray]:
    ys = np.arange(rows.start, rows.stop, dtype=np.float64) + 0.5
    xs = np.arange(cols.start, cols.stop, dtype=np.float64) + 0.5
    return np.meshgrid(xs, ys)


def rasterize_rect(r: GraspRectangle, dims: Tuple[int, int]) -> PixelMask:
    h, w = dims
    out = np.zeros((h, w), dtype=bool)
    window = pixel_window(r, dims)
    if window is not None:
        rows, cols = window
        xs, ys = window_centres(rows, cols)
        out[rows, cols] = contains_points(r, xs, ys)
    return PixelMask(out)


def rasterize_center_third(r: GraspRectangle, dims: Tuple[int, int]) -> PixelMask:
    return rasterize_rect(center_third(r), dims)


def overlapping_pixels(r: GraspRectangle, dims: Tuple[int, int]) -> PixelMask:
    """
    Pixels whose unit square shares positive area with `r` (separating-axis test
    on x, y and the two rectangle axes, with OVERLAP_EPS slack).
    """
    h, w = dims
    out = np.zeros((h, w), dtype=bool)
    if r.width <= 0 or r.height <= 0:
        return PixelMask(out)
    window = pixel_window(r, dims, margin=1.0)
    if window is None:
        return PixelMask(out)
    rows, cols = window
    xs, ys = window_centres(rows, cols)

    corners = rect_corners(r)
    x_lo, y_lo = corners.min(axis=0)
    x_hi, y_hi = corners.max(axis=0)
    hit = (np.minimum(x_hi, xs + 0.5) - np.maximum(x_lo, xs - 0.5) > OVERLAP_EPS) & (
        np.minimum(y_hi, ys + 0.5) - np.maximum(y_lo, ys - 0.5) > OVERLAP_EPS
    )

    for (ax, ay), half in zip(axes(r), (r.width / 2.0, r.height / 2.0)):
        centre = r.cx * ax + r.cy * ay
        proj = xs * ax + ys * ay
        pixel_half = 0.5 * (abs(ax) + abs(ay))
        overlap = np.minimum(centre + half, proj + pixel_half) - np.maximum(centre - half, proj - pixel_half)
        hit &= overlap > OVERLAP_EPS

    out[rows, cols] = hit
    return PixelMask(out)


def inside_image(r: GraspRectangle, dims: Tuple[int, int]) -> bool:
    h, w = dims
    corners = rect_corners(r)
    xs, ys = corners[:, 0], corners[:, 1]
    return bool(
        (xs >= -OVERLAP_EPS).all()
        and (xs <= w + OVERLAP_EPS).all()
        and (ys >= -OVERLAP_EPS).all()
        and (ys <= h + OVERLAP_EPS).all()
    )

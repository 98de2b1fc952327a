# graspmaps/core/oracle.py
"""
Planar antipodal grasp check against an occupancy mask.

Two jaw plates (jaw_thickness along the grasp axis, jaw_length across it) sit
just outside the opening on both ends of the grasp axis. The grasp fails if a
plate leaves the image or touches an occupied pixel, and misses if nothing
occupied lies between the plates or the opening is outside the gripper range.
No forces or friction are modelled.
"""
from __future__ import annotations

import zlib
from collections import Counter
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

from graspmaps.config import GripperParams, MapGenConfig, MapMode
from graspmaps.core.extraction import extract_grasp, sample_support_grasp
from graspmaps.core.geometry import axes, inside_image, overlapping_pixels
from graspmaps.core.ground_truth import generate_maps
from graspmaps.errors import MissingMaskError, MissingPredictionError
from graspmaps.models import PixelMask
from graspmaps.schemas import (
    BaselineComparison,
    GraspOutcome,
    GraspRectangle,
    GraspScene,
    OracleReport,
    OracleSceneResult,
)


def jaw_rectangles(g: GraspRectangle, gp: GripperParams) -> Tuple[GraspRectangle, GraspRectangle]:
    (ux, uy), _ = axes(g)
    offset = g.width / 2.0 + gp.jaw_thickness / 2.0
    return tuple(  # type: ignore[return-value]
        GraspRectangle(
            cx=g.cx + sign * offset * ux,
            cy=g.cy + sign * offset * uy,
            theta=g.theta,
            width=gp.jaw_thickness,
            height=gp.jaw_length,
        )
        for sign in (-1.0, 1.0)
    )


def closing_region(g: GraspRectangle, gp: GripperParams) -> GraspRectangle:
    return g.model_copy(update={"height": gp.jaw_length})


def check_grasp(mask: PixelMask, g: GraspRectangle, gp: GripperParams) -> GraspOutcome:
    dims = (mask.height, mask.width)
    jaws = jaw_rectangles(g, gp)
    if not all(inside_image(jaw, dims) for jaw in jaws):
        return GraspOutcome.out_of_bounds
    for jaw in jaws:
        if (overlapping_pixels(jaw, dims).data & mask.data).any():
            return GraspOutcome.jaw_collision
    if g.width > gp.w_max or g.width < gp.w_min:
        return GraspOutcome.miss
    if not (overlapping_pixels(closing_region(g, gp), dims).data & mask.data).any():
        return GraspOutcome.miss
    return GraspOutcome.success


def oracle_outcomes(scenes: Sequence[GraspScene], preds: Mapping[str, GraspRectangle],
                    gp: GripperParams) -> List[OracleSceneResult]:
    no_mask = [s.scene_id for s in scenes if s.mask is None]
    if no_mask:
        raise MissingMaskError(no_mask)
    no_pred = [s.scene_id for s in scenes if s.scene_id not in preds]
    if no_pred:
        raise MissingPredictionError(no_pred)
    return [
        OracleSceneResult(scene_id=s.scene_id, outcome=check_grasp(s.mask, preds[s.scene_id], gp))
        for s in sorted(scenes, key=lambda s: s.scene_id)
    ]


def assemble_oracle_report(results: Sequence[OracleSceneResult]) -> OracleReport:
    ordered = sorted(results, key=lambda r: r.scene_id)
    tally = Counter(r.outcome for r in ordered)
    counts: Dict[str, int] = {o.value: tally.get(o, 0) for o in GraspOutcome}
    n = len(ordered)
    return OracleReport(
        per_scene=ordered,
        counts=counts,
        success_rate=(counts[GraspOutcome.success.value] / n) if n else 0.0,
        scene_count=n,
    )


def sgt_proxy_rate(scenes: Sequence[GraspScene], preds: Mapping[str, GraspRectangle],
                   gp: GripperParams) -> float:
    """Fraction of scenes whose predicted grasp the oracle rates Success."""
    return assemble_oracle_report(oracle_outcomes(scenes, preds, gp)).success_rate


def baseline_rng(seed: int, scene_id: str) -> np.random.Generator:
    """Per-scene stream keyed by the scene id, independent of scene order."""
    return np.random.default_rng([seed, zlib.crc32(scene_id.encode("utf-8"))])


def baseline_trial(scene: GraspScene, gp: GripperParams, seed: int,
                   maps: MapGenConfig) -> Tuple[GraspOutcome, GraspOutcome]:
    """
    Outcome of the grasp read at the strong-map maximum, and of a grasp read
    at a uniformly random pixel of the binary-map support.
    """
    if scene.mask is None:
        raise MissingMaskError([scene.scene_id])
    strong = generate_maps(scene, maps.model_copy(update={"mode": MapMode.strong}))
    binary = generate_maps(scene, maps.model_copy(update={"mode": MapMode.binary}))
    picked = extract_grasp(strong, maps.w_max).rect
    sampled = sample_support_grasp(binary, maps.w_max, baseline_rng(seed, scene.scene_id)).rect
    return check_grasp(scene.mask, picked, gp), check_grasp(scene.mask, sampled, gp)


def summarize_baseline(trials: Sequence[Tuple[GraspOutcome, GraspOutcome]], seed: int) -> BaselineComparison:
    n = len(trials)
    strong_hits = sum(1 for strong, _ in trials if strong is GraspOutcome.success)
    random_hits = sum(1 for _, rand in trials if rand is GraspOutcome.success)
    return BaselineComparison(
        strong_rate=strong_hits / n if n else 0.0,
        random_binary_rate=random_hits / n if n else 0.0,
        seed=seed,
        scene_count=n,
    )


def compare_support_baseline(scenes: Sequence[GraspScene], gp: GripperParams, seed: int,
                             maps: MapGenConfig | None = None) -> BaselineComparison:
    maps = maps or MapGenConfig()
    no_mask = [s.scene_id for s in scenes if s.mask is None]
    if no_mask:
        raise MissingMaskError(no_mask)
    ordered = sorted(scenes, key=lambda s: s.scene_id)
    return summarize_baseline([baseline_trial(s, gp, seed, maps) for s in ordered], seed)

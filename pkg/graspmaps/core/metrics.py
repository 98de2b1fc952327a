# graspmaps/core/metrics.py
"""
Rectangle metric: a predicted grasp is correct when some annotated grasp
overlaps it with IoU above the threshold and their orientations differ by at
most 30 degrees.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Optional, Sequence

from graspmaps.config import DEFAULT_THRESHOLDS
from graspmaps.core.geometry import angle_offset, rect_iou
from graspmaps.errors import EmptyAnnotationError, InputError, MissingPredictionError
from graspmaps.schemas import EvalReport, GraspRectangle, GraspScene, SceneEvalResult, threshold_key

ANGLE_TOLERANCE_DEG = 30.0


def is_match(iou: float, offset_deg: float, iou_threshold: float,
             angle_tolerance: float = ANGLE_TOLERANCE_DEG) -> bool:
    return iou > iou_threshold and offset_deg <= angle_tolerance


def _require(gts: Sequence[GraspRectangle]) -> None:
    if not gts:
        raise EmptyAnnotationError("no ground-truth grasps to compare against")


def grasp_success(pred: GraspRectangle, gts: Sequence[GraspRectangle], iou_threshold: float,
                  angle_tolerance: float = ANGLE_TOLERANCE_DEG) -> bool:
    _require(gts)
    return any(
        is_match(rect_iou(pred, gt), angle_offset(pred.theta, gt.theta), iou_threshold, angle_tolerance)
        for gt in gts
    )


def scene_best_iou(pred: GraspRectangle, gts: Sequence[GraspRectangle], angle_gated: bool = True,
                   angle_tolerance: float = ANGLE_TOLERANCE_DEG) -> float:
    """Max IoU over the annotations (only those within the angle gate, unless disabled)."""
    _require(gts)
    best = 0.0
    for gt in gts:
        if angle_gated and angle_offset(pred.theta, gt.theta) > angle_tolerance:
            continue
        best = max(best, rect_iou(pred, gt))
    return best


def evaluate_scene(scene_id: str, pred: GraspRectangle, gts: Sequence[GraspRectangle],
                   thresholds: Iterable[float]) -> SceneEvalResult:
    best = scene_best_iou(pred, gts)
    return SceneEvalResult(
        scene_id=scene_id,
        best_iou=best,
        best_iou_raw=scene_best_iou(pred, gts, angle_gated=False),
        # success at t is exactly "some gated annotation has IoU > t"
        success_at={threshold_key(t): best > t for t in thresholds},
    )


def check_thresholds(thresholds: Iterable[float]) -> List[float]:
    values = sorted(set(float(t) for t in thresholds))
    for t in values:
        if not 0.0 < t < 1.0:
            raise InputError(f"threshold {t} outside (0, 1)")
    return values


def assemble_report(results: Iterable[SceneEvalResult], thresholds: Iterable[float],
                    sgt_proxy_rate: Optional[float] = None) -> EvalReport:
    ordered = sorted(results, key=lambda r: r.scene_id)
    thresholds = check_thresholds(thresholds)
    n = len(ordered)
    rates: Dict[str, float] = {}
    for t in thresholds:
        key = threshold_key(t)
        rates[key] = (sum(1 for r in ordered if r.success_at[key]) / n) if n else 0.0
    return EvalReport(
        thresholds=thresholds,
        per_scene=ordered,
        success_rate=rates,
        iou_avg=(sum(r.best_iou for r in ordered) / n) if n else 0.0,
        iou_avg_raw=(sum(r.best_iou_raw for r in ordered) / n) if n else 0.0,
        scene_count=n,
        sgt_proxy_rate=sgt_proxy_rate,
    )


def evaluate_dataset(preds: Mapping[str, GraspRectangle], scenes: Sequence[GraspScene],
                     thresholds: Iterable[float] = DEFAULT_THRESHOLDS) -> EvalReport:
    thresholds = check_thresholds(thresholds)
    missing = [s.scene_id for s in scenes if s.scene_id not in preds]
    if missing:
        raise MissingPredictionError(missing)
    results = [evaluate_scene(s.scene_id, preds[s.scene_id], s.grasps, thresholds) for s in scenes]
    return assemble_report(results, thresholds)


def render_table(report: EvalReport) -> str:
    """Aligned plain-text summary: one column per threshold, then Avg (and SGT proxy)."""
    headers = [f"{float(t) * 100:g}%" for t in report.thresholds] + ["Avg"]
    values = [f"{report.success_rate[threshold_key(t)] * 100:.2f}" for t in report.thresholds]
    values.append(f"{report.iou_avg * 100:.2f}")
    if report.sgt_proxy_rate is not None:
        headers.append("SGT-proxy")
        values.append(f"{report.sgt_proxy_rate * 100:.2f}")
    headers.insert(0, "Scenes")
    values.insert(0, str(report.scene_count))

    widths = [max(len(h), len(v)) for h, v in zip(headers, values)]
    head = "  ".join(h.rjust(w) for h, w in zip(headers, widths))
    rule = "  ".join("-" * w for w in widths)
    row = "  ".join(v.rjust(w) for v, w in zip(values, widths))
    lines = [head, rule, row, "", f"IoU-Avg (angle-gated) {report.iou_avg:.4f}   raw {report.iou_avg_raw:.4f}"]
    return "\n".join(lines) + "\n"

"""
Tests for the rectangle metric and dataset aggregation.
"""
import math

import pytest

from graspmaps.core.geometry import angle_offset, rect_iou
from graspmaps.core.metrics import (
    assemble_report,
    check_thresholds,
    evaluate_dataset,
    grasp_success,
    is_match,
    render_table,
    scene_best_iou,
)
from graspmaps.errors import EmptyAnnotationError, InputError, MissingPredictionError
from graspmaps.schemas import GraspRectangle, GraspScene, SceneEvalResult, threshold_key


def rect(cx, cy, theta, w, h) -> GraspRectangle:
    return GraspRectangle(cx=cx, cy=cy, theta=theta, width=w, height=h)


def result(scene_id: str, best: float, thresholds) -> SceneEvalResult:
    return SceneEvalResult(
        scene_id=scene_id,
        best_iou=best,
        best_iou_raw=best,
        success_at={threshold_key(t): best > t for t in thresholds},
    )


class TestIsMatch:
    def test_gates(self):
        assert is_match(0.26, 29.0, 0.25)
        assert not is_match(0.26, 31.0, 0.25)
        assert not is_match(0.24, 0.0, 0.25)

    def test_threshold_is_strict_and_angle_inclusive(self):
        assert not is_match(0.25, 0.0, 0.25)
        assert is_match(0.5, 30.0, 0.25)


class TestGraspSuccess:
    def test_angle_gate_on_rotated_square(self):
        gt = [rect(10, 10, 0.0, 10, 10)]
        assert grasp_success(rect(10, 10, math.radians(29), 10, 10), gt, 0.25)
        assert not grasp_success(rect(10, 10, math.radians(31), 10, 10), gt, 0.25)

    def test_any_annotation_may_match(self):
        gts = [rect(50, 50, 0.0, 10, 10), rect(10, 10, 0.1, 10, 10)]
        assert grasp_success(rect(10, 10, 0.0, 10, 10), gts, 0.5)

    def test_requires_annotations(self):
        with pytest.raises(EmptyAnnotationError):
            grasp_success(rect(0, 0, 0, 1, 1), [], 0.25)

    def test_invariant_under_rigid_motion(self, rng):
        """Moving prediction and annotations together keeps the verdict, away from the gate edges."""
        checked = 0
        for _ in range(300):
            gts = [rect(*rng.uniform(15, 25, 2), rng.uniform(-1.5, 1.5), *rng.uniform(4, 14, 2)) for _ in range(3)]
            pred = rect(*rng.uniform(15, 25, 2), rng.uniform(-1.5, 1.5), *rng.uniform(4, 14, 2))
            edges = [(rect_iou(pred, g), angle_offset(pred.theta, g.theta)) for g in gts]
            if any(abs(iou - 0.25) < 1e-6 or abs(off - 30.0) < 1e-6 for iou, off in edges):
                continue
            phi = float(rng.uniform(-math.pi, math.pi))
            tx, ty = rng.uniform(-40, 40, 2)
            c, s = math.cos(phi), math.sin(phi)

            def move(r):
                return rect(c * r.cx - s * r.cy + tx, s * r.cx + c * r.cy + ty, r.theta + phi, r.width, r.height)

            assert grasp_success(move(pred), [move(g) for g in gts], 0.25) == grasp_success(pred, gts, 0.25)
            checked += 1
        assert checked > 250


class TestSceneBestIoU:
    def test_shifted_third(self):
        best = scene_best_iou(rect(5, 0, 0, 10, 20), [rect(0, 0, 0, 10, 20)])
        assert best == pytest.approx(1 / 3, abs=1e-12)

    def test_takes_the_maximum(self):
        pred = rect(0, 0, 0, 10, 10)
        gts = [rect(5, 0, 0, 10, 10), rect(1, 0, 0, 10, 10)]
        # shift of 1 on a side of 10: 90 / 110
        assert scene_best_iou(pred, gts) == pytest.approx(90 / 110)

    def test_angle_gate_can_be_disabled(self):
        pred, gts = rect(0, 0, 0, 10, 10), [rect(0, 0, math.radians(45), 10, 10)]
        assert scene_best_iou(pred, gts) == 0.0
        assert scene_best_iou(pred, gts, angle_gated=False) > 0.5


class TestAggregation:
    def test_hand_example(self):
        thresholds = [0.25, 0.5]
        results = [result(f"s{i}", b, thresholds) for i, b in enumerate([0.9, 0.4, 0.26, 0.1])]
        report = assemble_report(results, thresholds)
        assert report.success_rate == {"0.25": 0.75, "0.50": 0.25}
        assert report.iou_avg == pytest.approx(0.415)
        assert report.scene_count == 4
        assert [r.scene_id for r in report.per_scene] == ["s0", "s1", "s2", "s3"]

    def test_empty_threshold_list(self):
        scene = GraspScene(scene_id="a", image_h=10, image_w=10, grasps=[rect(5, 5, 0, 4, 2)])
        report = evaluate_dataset({"a": rect(5, 5, 0, 4, 2)}, [scene], thresholds=[])
        assert report.success_rate == {} and report.thresholds == []
        assert report.iou_avg == pytest.approx(1.0)

    def test_scene_order_does_not_matter(self, rng):
        scenes, preds = [], {}
        for k in range(20):
            sid = f"scene_{k:02d}"
            gts = [rect(*rng.uniform(10, 30, 2), rng.uniform(-1.5, 1.5), *rng.uniform(4, 14, 2)) for _ in range(2)]
            scenes.append(GraspScene(scene_id=sid, image_h=40, image_w=40, grasps=gts))
            preds[sid] = rect(*rng.uniform(10, 30, 2), rng.uniform(-1.5, 1.5), *rng.uniform(4, 14, 2))
        forward = evaluate_dataset(preds, scenes)
        shuffled = [scenes[i] for i in rng.permutation(len(scenes))]
        assert evaluate_dataset(preds, shuffled) == forward
        assert evaluate_dataset(preds, scenes[::-1]) == forward

    def test_missing_prediction(self):
        scenes = [GraspScene(scene_id=s, image_h=10, image_w=10, grasps=[rect(5, 5, 0, 4, 2)]) for s in "ab"]
        with pytest.raises(MissingPredictionError) as exc:
            evaluate_dataset({"a": rect(5, 5, 0, 4, 2)}, scenes)
        assert exc.value.scene_ids == ["b"]

    def test_thresholds_are_sorted_and_checked(self):
        assert check_thresholds([0.5, 0.25, 0.5]) == [0.25, 0.5]
        with pytest.raises(InputError):
            check_thresholds([1.5])

    def test_no_scenes(self):
        report = assemble_report([], [0.25])
        assert report.scene_count == 0 and report.success_rate == {"0.25": 0.0}


class TestRenderTable:
    def test_columns(self):
        thresholds = [0.25, 0.3]
        report = assemble_report([result("a", 0.9, thresholds), result("b", 0.28, thresholds)], thresholds)
        lines = render_table(report).splitlines()
        assert lines[0].split() == ["Scenes", "25%", "30%", "Avg"]
        assert lines[2].split() == ["2", "100.00", "50.00", "59.00"]

    def test_proxy_column(self):
        report = assemble_report([result("a", 0.9, [0.25])], [0.25], sgt_proxy_rate=0.5)
        lines = render_table(report).splitlines()
        assert lines[0].split()[-1] == "SGT-proxy"
        assert lines[2].split()[-1] == "50.00"

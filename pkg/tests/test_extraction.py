"""
Tests for turning grasp maps back into grasps: angle decoding, argmax
tie-breaking, top-k suppression and smoothing.
"""
import math

import numpy as np
import pytest

from graspmaps.config import MapGenConfig, MapMode
from graspmaps.core.extraction import (
    decode_angle,
    extract_grasp,
    extract_top_k,
    sample_support_grasp,
)
from graspmaps.core.ground_truth import encode_angle, generate_maps
from graspmaps.errors import NoGraspError, UndefinedAngleError
from graspmaps.models import GraspMapStack
from graspmaps.schemas import GraspRectangle, GraspScene

W_MAX = 150.0


def flat_stack(bins=3, h=16, w=16, q=0.0) -> GraspMapStack:
    stack = GraspMapStack.zeros(bins, h, w)
    stack.q[...] = q
    stack.cos[...] = 1.0
    return stack


def angular_gap(a: float, b: float) -> float:
    d = abs(a - b) % math.pi
    return min(d, math.pi - d)


class TestDecodeAngle:
    def test_examples(self):
        assert decode_angle(1.0, 0.0) == 0.0
        assert decode_angle(0.0, 1.0) == pytest.approx(math.pi / 4)
        assert decode_angle(-1.0, 0.0) == -math.pi / 2
        assert decode_angle(0.0, -1.0) == pytest.approx(-math.pi / 4)

    def test_scale_free(self):
        assert decode_angle(3.0, 3.0) == pytest.approx(math.pi / 8)

    def test_round_trip(self, rng):
        for theta in rng.uniform(-math.pi / 2, math.pi / 2, 10_000):
            out = decode_angle(*encode_angle(float(theta)))
            assert -math.pi / 2 <= out < math.pi / 2
            assert angular_gap(out, float(theta)) < 1e-9

    def test_zero_vector_is_undefined(self):
        with pytest.raises(UndefinedAngleError):
            decode_angle(0.0, 0.0)


class TestExtractGrasp:
    def test_recovers_pixel_centred_grasp(self):
        g = GraspRectangle(cx=10.5, cy=8.5, theta=0.3, width=12.0, height=6.0)
        scene = GraspScene(scene_id="s", image_h=20, image_w=24, grasps=[g])
        stack = generate_maps(scene, MapGenConfig(mode=MapMode.strong, bins=3, w_max=W_MAX))
        out = extract_grasp(stack, W_MAX)
        assert (out.rect.cx, out.rect.cy) == (10.5, 8.5)
        assert out.rect.theta == pytest.approx(0.3, abs=1e-12)
        assert out.rect.width == pytest.approx(12.0, abs=1e-9)
        assert out.rect.height == pytest.approx(6.0, abs=1e-9)
        assert out.bin == 1 and out.quality == 1.0

    def test_reads_channels_from_the_winning_bin(self):
        stack = flat_stack(bins=3, h=4, w=4)
        stack.q[0, 0, 0] = 0.5
        stack.q[2, 1, 3] = 0.8
        stack.cos[2, 1, 3], stack.sin[2, 1, 3] = encode_angle(1.2)
        stack.width[2, 1, 3] = 0.2
        out = extract_grasp(stack, W_MAX)
        assert out.bin == 2 and out.quality == 0.8
        assert (out.rect.cx, out.rect.cy) == (3.5, 1.5)
        assert out.rect.theta == pytest.approx(1.2, abs=1e-12)
        assert out.rect.width == pytest.approx(30.0)
        assert out.rect.height == pytest.approx(15.0)

    def test_ties_go_to_lowest_bin_then_row_major(self):
        out = extract_grasp(flat_stack(q=0.5), W_MAX)
        assert out.bin == 0
        assert (out.rect.cx, out.rect.cy) == (0.5, 0.5)
        assert out.rect.theta == 0.0

    def test_all_zero_quality(self):
        with pytest.raises(NoGraspError):
            extract_grasp(GraspMapStack.zeros(3, 8, 8), W_MAX)

    def test_monotone_rescaling_of_quality(self, rng):
        """Only the order of Q values matters to the argmax."""
        for _ in range(30):
            scene = GraspScene(scene_id="s", image_h=24, image_w=24, grasps=[
                GraspRectangle(cx=float(rng.uniform(2, 22)), cy=float(rng.uniform(2, 22)),
                               theta=float(rng.uniform(-1.5, 1.5)), width=float(rng.uniform(6, 30)),
                               height=float(rng.uniform(3, 10)))
                for _ in range(3)
            ])
            stack = generate_maps(scene, MapGenConfig(mode=MapMode.strong, sigma=float(rng.uniform(0.5, 3.0))))
            base = extract_grasp(stack, W_MAX)
            for rescale in (lambda q: 4.0 * q, np.sqrt, lambda q: np.expm1(3.0 * q)):
                moved = extract_grasp(GraspMapStack(rescale(stack.q), stack.cos, stack.sin, stack.width), W_MAX)
                assert (moved.bin, moved.rect) == (base.bin, base.rect)

    def test_strong_argmax_sits_next_to_an_annotated_centre(self, rng, synthetic_scenes):
        random_scenes = [
            GraspScene(scene_id="r", image_h=32, image_w=32, grasps=[
                GraspRectangle(cx=float(rng.uniform(0, 32)), cy=float(rng.uniform(0, 32)),
                               theta=float(rng.uniform(-1.5, 1.5)), width=float(rng.uniform(6, 40)),
                               height=float(rng.uniform(3, 12)))
                for _ in range(int(rng.integers(1, 6)))
            ])
            for _ in range(40)
        ]
        for scene in list(synthetic_scenes) + random_scenes:
            cfg = MapGenConfig(mode=MapMode.strong, sigma=float(rng.uniform(0.5, 3.0)))
            out = extract_grasp(generate_maps(scene, cfg), W_MAX)
            nearest = min(math.hypot(out.rect.cx - g.cx, out.rect.cy - g.cy) for g in scene.grasps)
            assert nearest <= 1.0

    def test_smoothing_prefers_a_plateau_over_a_spike(self):
        stack = flat_stack(bins=1)
        stack.q[0, 2, 2] = 1.0
        stack.q[0, 11:14, 11:14] = 0.9
        assert (extract_grasp(stack, W_MAX).rect.cx, extract_grasp(stack, W_MAX).rect.cy) == (2.5, 2.5)
        smoothed = extract_grasp(stack, W_MAX, smooth_sigma=1.5)
        assert (smoothed.rect.cx, smoothed.rect.cy) == (12.5, 12.5)
        assert smoothed.quality == 0.9


class TestExtractTopK:
    def two_peaks(self) -> GraspMapStack:
        stack = flat_stack(bins=3, q=0.1)
        stack.q[1, 2, 2] = 1.0
        stack.q[1, 10, 10] = 0.9
        return stack

    def test_k1_matches_argmax(self):
        stack = self.two_peaks()
        assert extract_top_k(stack, W_MAX, 1) == [extract_grasp(stack, W_MAX)]

    def test_two_peaks(self):
        picked = extract_top_k(self.two_peaks(), W_MAX, 2, min_separation=5.0)
        assert [(p.rect.cx, p.rect.cy, p.quality) for p in picked] == [(2.5, 2.5, 1.0), (10.5, 10.5, 0.9)]

    def test_large_separation_keeps_one(self):
        assert len(extract_top_k(self.two_peaks(), W_MAX, 5, min_separation=100.0)) == 1

    def test_no_separation_allows_neighbours(self):
        picked = extract_top_k(self.two_peaks(), W_MAX, 3)
        assert [p.quality for p in picked] == [1.0, 0.9, 0.1]

    def test_empty_support_gives_nothing(self):
        assert extract_top_k(GraspMapStack.zeros(1, 4, 4), W_MAX, 3) == []

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            extract_top_k(self.two_peaks(), W_MAX, 0)
        with pytest.raises(ValueError):
            extract_top_k(self.two_peaks(), W_MAX, 1, min_separation=-1.0)


class TestSampleSupport:
    def test_only_positive_pixels_are_drawn(self):
        stack = flat_stack(bins=2, h=6, w=6)
        stack.q[1, 4, 2] = 0.3
        out = sample_support_grasp(stack, W_MAX, np.random.default_rng(0))
        assert (out.bin, out.rect.cx, out.rect.cy) == (1, 2.5, 4.5)

    def test_empty_support(self):
        with pytest.raises(NoGraspError):
            sample_support_grasp(GraspMapStack.zeros(1, 4, 4), W_MAX, np.random.default_rng(0))

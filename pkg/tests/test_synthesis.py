"""
Tests for the synthetic corpus and the two end-to-end studies run on it:
map round-trip fidelity and strong-map extraction against random placement
in binary-map support.
"""
import pytest

from graspmaps.config import GripperParams, MapGenConfig, MapMode, SynthConfig
from graspmaps.core.extraction import extract_grasp
from graspmaps.core.ground_truth import generate_maps, union_support
from graspmaps.core.metrics import evaluate_dataset
from graspmaps.core.oracle import baseline_rng, check_grasp, compare_support_baseline
from graspmaps.core.synthesis import scene_id_for, synthesize_corpus, synthesize_scene
from graspmaps.errors import SynthesisError
from graspmaps.schemas import GraspOutcome
from graspmaps.utils.angles import degrees_to_grasp_angle, grasp_angle_to_degrees


@pytest.fixture(scope="module")
def study_scenes():
    return synthesize_corpus(150, seed=0, cfg=SynthConfig())


class TestSynthesis:
    def test_deterministic(self):
        a = synthesize_scene(3, seed=11, cfg=SynthConfig())
        b = synthesize_scene(3, seed=11, cfg=SynthConfig())
        assert a.grasps == b.grasps and a.mask == b.mask

    def test_seed_changes_output(self):
        assert synthesize_scene(0, seed=1, cfg=SynthConfig()).grasps != synthesize_scene(0, seed=2, cfg=SynthConfig()).grasps

    def test_scene_ids_and_counts(self, synthetic_scenes):
        cfg = SynthConfig()
        assert [s.scene_id for s in synthetic_scenes] == [scene_id_for(i) for i in range(12)]
        for scene in synthetic_scenes:
            assert cfg.min_grasps <= len(scene.grasps) <= cfg.max_grasps
            assert scene.dims == (cfg.image_size, cfg.image_size)
            assert scene.mask.any()

    def test_every_annotation_passes_the_oracle(self, synthetic_scenes):
        gp = GripperParams()
        for scene in synthetic_scenes:
            for g in scene.grasps:
                assert check_grasp(scene.mask, g, gp) is GraspOutcome.success

    def test_centres_on_pixel_centres(self, synthetic_scenes):
        for scene in synthetic_scenes:
            for g in scene.grasps:
                assert g.cx % 1 == 0.5 and g.cy % 1 == 0.5

    def test_angles_reload_from_degrees(self, synthetic_scenes):
        for scene in synthetic_scenes:
            for g in scene.grasps:
                assert degrees_to_grasp_angle(grasp_angle_to_degrees(g.theta)) == g.theta

    def test_impossible_gripper_is_an_input_error(self):
        cfg = SynthConfig(min_grasps=1, max_grasps=1, gripper=GripperParams(w_min=0.5, w_max=2.0))
        with pytest.raises(SynthesisError, match="scene 0"):
            synthesize_scene(0, seed=1, cfg=cfg)

    def test_binary_support_leaves_the_object(self, study_scenes):
        # overhanging annotations put valid centres on background pixels
        off_object = 0
        for scene in study_scenes[:40]:
            support = union_support(generate_maps(scene, MapGenConfig(mode=MapMode.binary)))
            off_object += int((support.data & ~scene.mask.data).sum())
        assert off_object > 0


class TestRoundTrip:
    def test_strong_maps_recover_annotations(self, study_scenes):
        cfg = MapGenConfig(mode=MapMode.strong, sigma=1.0, bins=3)
        preds = {s.scene_id: extract_grasp(generate_maps(s, cfg), cfg.w_max).rect for s in study_scenes}
        report = evaluate_dataset(preds, study_scenes, thresholds=[0.25])
        assert report.success_rate["0.25"] == 1.0
        assert report.iou_avg >= 0.5


class TestSupportBaseline:
    def test_strong_extraction_beats_random_support(self, study_scenes):
        comparison = compare_support_baseline(study_scenes, GripperParams(), seed=0)
        assert comparison.scene_count == 150
        assert comparison.strong_rate == 1.0
        assert comparison.margin >= 0.05

    def test_independent_of_scene_order(self, study_scenes):
        subset = study_scenes[:20]
        forward = compare_support_baseline(subset, GripperParams(), seed=4)
        backward = compare_support_baseline(list(reversed(subset)), GripperParams(), seed=4)
        assert forward == backward

    def test_rng_keyed_by_scene(self):
        a = baseline_rng(0, "scene_00001").integers(1 << 30)
        b = baseline_rng(0, "scene_00001").integers(1 << 30)
        c = baseline_rng(0, "scene_00002").integers(1 << 30)
        assert a == b and a != c

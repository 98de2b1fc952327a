# graspmaps/workflows/corpus_workflow.py
from __future__ import annotations

from functools import partial
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from graspmaps.activities.evaluation import (
    baseline_scene_activity,
    evaluate_scene_activity,
    loss_scene_activity,
    oracle_scene_activity,
)
from graspmaps.activities.maps import (
    GenSummary,
    extract_scene_activity,
    generate_scene_activity,
    render_inputs_activity,
    render_scene_activity,
)
from graspmaps.activities.scenes import load_scene_activity, synthesize_scene_activity
from graspmaps.config import RunConfig
from graspmaps.core.metrics import assemble_report, check_thresholds
from graspmaps.core.oracle import assemble_oracle_report, summarize_baseline
from graspmaps.dataset.corpus import list_scene_dirs, load_predictions
from graspmaps.dataset.tensors import list_tensors, scene_id_of
from graspmaps.errors import AnnotationBatchError, MissingMaskError, MissingPredictionError
from graspmaps.logging import get_logger
from graspmaps.schemas import EvalReport, GraspRectangle, GraspScene, LossReport, OracleReport, ScenePrediction
from graspmaps.workers.pool import run_pool

logger = get_logger(__name__)


class CorpusWorkflow:
    """
    Runs one CLI command over a corpus: per-scene activities go through the
    worker pool, results are merged in scene_id order.
    """

    def __init__(self, cfg: RunConfig) -> None:
        self.cfg = cfg
        self.current_step = "init"
        self.scene_count = 0
        self.rejected: Dict[str, str] = {}

    def status(self) -> Dict[str, Any]:
        return {
            "command": self.cfg.command,
            "step": self.current_step,
            "scenes": self.scene_count,
            "rejected": dict(self.rejected),
        }

    def _step(self, name: str) -> None:
        self.current_step = name
        logger.info("workflow_step", command=self.cfg.command, step=name, scenes=self.scene_count)

    async def _pool(self, items, fn, label: str):
        return await run_pool(items, fn, jobs=self.cfg.jobs, label=label)

    async def load_corpus(self, corpus_dir: Path) -> List[GraspScene]:
        """Every scene of the corpus; any rejected annotation file fails the whole load."""
        self._step("load")
        loads = await self._pool(list_scene_dirs(corpus_dir), load_scene_activity, "load")
        self.rejected = {ld.path: ld.error for ld in loads if ld.error is not None}
        if self.rejected:
            raise AnnotationBatchError(self.rejected)
        scenes = sorted((ld.scene for ld in loads), key=lambda s: s.scene_id)
        self.scene_count = len(scenes)
        return scenes

    async def _predictions_for(self, scenes: List[GraspScene], pred_dir: Path) -> Dict[str, GraspRectangle]:
        preds: Dict[str, ScenePrediction] = load_predictions(pred_dir)
        missing = [s.scene_id for s in scenes if s.scene_id not in preds]
        if missing:
            raise MissingPredictionError(missing)
        return {s.scene_id: preds[s.scene_id].grasp.rect for s in scenes}

    async def gen(self, corpus_dir: Path, out_dir: Path) -> List[GenSummary]:
        scenes = await self.load_corpus(corpus_dir)
        self._step("generate")
        run = partial(
            generate_scene_activity,
            cfg=self.cfg.maps,
            out_dir=out_dir,
            heatmaps=self.cfg.heatmaps,
            colormap=self.cfg.colormap,
        )
        summaries = await self._pool(scenes, run, "gen")
        self._step("done")
        return summaries

    async def extract(self, tensor_dir: Path, out_dir: Path) -> List[ScenePrediction]:
        self._step("extract")
        paths = list_tensors(tensor_dir)
        self.scene_count = len(paths)
        run = partial(
            extract_scene_activity,
            out_dir=out_dir,
            w_max=self.cfg.maps.w_max,
            top_k=self.cfg.top_k,
            min_separation=self.cfg.min_separation,
            smooth_sigma=self.cfg.smooth_sigma,
        )
        preds = await self._pool(paths, run, "extract")
        self._step("done")
        return preds

    async def loss(self, pred_dir: Path, gt_dir: Path) -> LossReport:
        self._step("pair")
        gt = {scene_id_of(p): p for p in list_tensors(gt_dir)}
        pred = {scene_id_of(p): p for p in list_tensors(pred_dir)}
        missing = sorted(set(gt) - set(pred))
        if missing:
            raise MissingPredictionError(missing)
        self.scene_count = len(gt)

        self._step("loss")
        pairs: List[Tuple[str, Path, Path]] = [(sid, pred[sid], gt[sid]) for sid in sorted(gt)]
        per_scene = await self._pool(pairs, lambda p: loss_scene_activity(*p, cfg=self.cfg.loss), "loss")
        n = len(per_scene)
        self._step("done")
        return LossReport(
            kind=self.cfg.loss.kind.value,
            positional=self.cfg.loss.positional,
            reduction=self.cfg.loss.reduction.value,
            per_scene=per_scene,
            mean_total=(sum(s.loss.total for s in per_scene) / n) if n else 0.0,
            scene_count=n,
        )

    async def evaluate(self, corpus_dir: Path, pred_dir: Path) -> EvalReport:
        thresholds = check_thresholds(self.cfg.thresholds)
        scenes = await self.load_corpus(corpus_dir)
        if self.cfg.with_oracle:
            self._require_masks(scenes)
        preds = await self._predictions_for(scenes, pred_dir)

        self._step("evaluate")
        results = await self._pool(
            scenes, lambda s: evaluate_scene_activity(s, preds[s.scene_id], thresholds), "eval"
        )
        proxy: Optional[float] = None
        if self.cfg.with_oracle:
            proxy = (await self._run_oracle(scenes, preds)).success_rate
        self._step("done")
        return assemble_report(results, thresholds, sgt_proxy_rate=proxy)

    @staticmethod
    def _require_masks(scenes: List[GraspScene]) -> None:
        no_mask = [s.scene_id for s in scenes if s.mask is None]
        if no_mask:
            raise MissingMaskError(no_mask)

    async def _run_oracle(self, scenes: List[GraspScene], preds: Dict[str, GraspRectangle]) -> OracleReport:
        self._step("oracle")
        gp = self.cfg.gripper
        results = await self._pool(scenes, lambda s: oracle_scene_activity(s, preds[s.scene_id], gp), "oracle")
        return assemble_oracle_report(results)

    async def oracle(self, corpus_dir: Path, pred_dir: Path) -> OracleReport:
        scenes = await self.load_corpus(corpus_dir)
        self._require_masks(scenes)
        preds = await self._predictions_for(scenes, pred_dir)
        report = await self._run_oracle(scenes, preds)
        if self.cfg.random_baseline:
            self._step("baseline")
            gp, seed, maps = self.cfg.gripper, self.cfg.seed, self.cfg.maps
            trials = await self._pool(scenes, lambda s: baseline_scene_activity(s, gp, seed, maps), "baseline")
            report = report.model_copy(update={"baseline": summarize_baseline(trials, seed)})
        self._step("done")
        return report

    async def synth(self, out_dir: Path) -> List[str]:
        self._step("synthesize")
        self.scene_count = self.cfg.count
        seed, synth = self.cfg.seed, self.cfg.synth
        ids = await self._pool(
            list(range(self.cfg.count)), lambda i: synthesize_scene_activity(i, seed, synth, out_dir), "synth"
        )
        self._step("done")
        return ids

    async def viz(self, tensor_dir: Path, out_dir: Path, raster_corpus: Optional[Path] = None) -> int:
        self._step("render")
        paths = list_tensors(tensor_dir)
        self.scene_count = len(paths)
        counts = await self._pool(paths, partial(render_scene_activity, out_dir=out_dir, colormap=self.cfg.colormap), "viz")
        if raster_corpus is not None:
            self._step("render_inputs")
            run = partial(render_inputs_activity, out_dir=out_dir, colormap=self.cfg.colormap)
            counts += await self._pool(list_scene_dirs(raster_corpus), run, "viz_inputs")
        self._step("done")
        return sum(counts)

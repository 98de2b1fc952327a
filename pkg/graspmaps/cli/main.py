# graspmaps/cli/main.py
"""
Command-line front end.

    graspmaps synth   --out CORPUS [--count N] [--seed N]
    graspmaps gen     CORPUS --out MAPS [--mode strong] [--sigma 1] [--bins 3] [--heatmaps]
    graspmaps extract MAPS --out PREDS [--top-k K]
    graspmaps eval    CORPUS PREDS [--thresholds 0.25,0.3,0.5,0.75] [--with-oracle]
    graspmaps oracle  CORPUS PREDS [--random-baseline]
    graspmaps loss    PRED_MAPS GT_MAPS [--kind mse] [--positional]
    graspmaps viz     MAPS --out PNGS [--inputs CORPUS]

Exit codes: 0 ok, 1 I/O failure, 2 bad input.
"""
from __future__ import annotations

import argparse
import asyncio
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from pydantic import BaseModel, ValidationError

from graspmaps.config import (
    LossKind,
    MapMode,
    Reduction,
    RunConfig,
    SoftRule,
    build_run_config,
    known_option_keys,
    load_config_file,
    merge_options,
)
from graspmaps.core.metrics import render_table
from graspmaps.dataset.files import dump_model, ensure_dir, write_model, write_text
from graspmaps.dataset.images import COLORMAPS
from graspmaps.errors import EXIT_INPUT, EXIT_OK, GraspMapsError, InputError
from graspmaps.logging import configure_logging, get_logger
from graspmaps.schemas import OracleReport
from graspmaps.workflows.corpus_workflow import CorpusWorkflow

EVAL_REPORT = "eval_report.json"
EVAL_TABLE = "eval_table.txt"
ORACLE_REPORT = "oracle_report.json"
LOSS_REPORT = "loss_report.json"

# positional arguments of each subcommand, in order
INPUTS: Dict[str, List[str]] = {
    "gen": ["corpus"],
    "extract": ["maps"],
    "loss": ["predictions", "ground_truth"],
    "eval": ["corpus", "predictions"],
    "oracle": ["corpus", "predictions"],
    "synth": [],
    "viz": ["maps"],
}


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", type=Path, default=None, help="JSON file of option values; flags win")
    p.add_argument("--out", type=str, default=None, help="output directory")
    p.add_argument("--jobs", type=int, default=None, help="scenes processed in parallel")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--log-level", default=None)
    p.add_argument("--log-json", action="store_true", default=None)
    return p


def _map_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--mode", choices=[m.value for m in MapMode], default=None)
    p.add_argument("--sigma", type=float, default=None, help="Gaussian width in pixels")
    p.add_argument("--bins", type=int, default=None, help="angle bins N")
    p.add_argument("--wmax", type=float, default=None, help="width normaliser in pixels")
    p.add_argument("--soft-floor", type=float, default=None)
    p.add_argument("--soft-rule", choices=[r.value for r in SoftRule], default=None)
    return p


def _gripper_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--jaw-thickness", type=float, default=None)
    p.add_argument("--jaw-length", type=float, default=None)
    p.add_argument("--gripper-wmin", type=float, default=None)
    p.add_argument("--gripper-wmax", type=float, default=None)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graspmaps", description="Grasp-map generation, decoding and evaluation")
    sub = parser.add_subparsers(dest="command", required=True)
    common, maps, gripper = _common_flags(), _map_flags(), _gripper_flags()

    gen = sub.add_parser("gen", parents=[common, maps], help="annotations -> GMAP1 tensors")
    gen.add_argument("corpus")
    gen.add_argument("--heatmaps", action="store_true", default=None)
    gen.add_argument("--colormap", choices=sorted(COLORMAPS), default=None)

    ext = sub.add_parser("extract", parents=[common], help="tensors -> <scene_id>.grasp.json")
    ext.add_argument("maps")
    ext.add_argument("--wmax", type=float, default=None)
    ext.add_argument("--top-k", type=int, default=None)
    ext.add_argument("--min-separation", type=float, default=None)
    ext.add_argument("--smooth-sigma", type=float, default=None)

    loss = sub.add_parser("loss", parents=[common], help="loss between predicted and ground-truth tensors")
    loss.add_argument("predictions")
    loss.add_argument("ground_truth")
    loss.add_argument("--kind", choices=[k.value for k in LossKind], default=None)
    loss.add_argument("--positional", action="store_true", default=None)
    loss.add_argument("--reduction", choices=[r.value for r in Reduction], default=None)

    ev = sub.add_parser("eval", parents=[common, gripper], help="rectangle metric over a corpus")
    ev.add_argument("corpus")
    ev.add_argument("predictions")
    ev.add_argument("--thresholds", type=str, default=None, help="comma-separated IoU thresholds")
    ev.add_argument("--with-oracle", action="store_true", default=None)

    orc = sub.add_parser("oracle", parents=[common, maps, gripper], help="2D grasp oracle over a corpus")
    orc.add_argument("corpus")
    orc.add_argument("predictions")
    orc.add_argument("--random-baseline", action="store_true", default=None)

    syn = sub.add_parser("synth", parents=[common, gripper], help="write a seeded synthetic corpus")
    syn.add_argument("--count", type=int, default=None)
    syn.add_argument("--image-size", type=int, default=None)
    syn.add_argument("--min-grasps", type=int, default=None)
    syn.add_argument("--max-grasps", type=int, default=None)
    syn.add_argument("--overhang-fraction", type=float, default=None)

    viz = sub.add_parser("viz", parents=[common], help="heatmap PNGs for every channel and bin")
    viz.add_argument("maps")
    viz.add_argument("--colormap", choices=sorted(COLORMAPS), default=None)
    viz.add_argument("--inputs", dest="raster_corpus", type=str, default=None,
                     help="corpus whose depth.tiff / rgb.png are rendered after input preprocessing")
    return parser


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    file_values = load_config_file(args.config) if args.config else {}
    flags = {key: getattr(args, key, None) for key in known_option_keys()}
    inputs = [Path(getattr(args, name)) for name in INPUTS[args.command]]
    return build_run_config(args.command, inputs, merge_options(file_values, flags))


def _require_out(cfg: RunConfig) -> Path:
    if cfg.out is None:
        raise InputError(f"{cfg.command} needs --out")
    return ensure_dir(cfg.out)


def _emit(cfg: RunConfig, filename: str, report: BaseModel) -> None:
    """Report JSON to --out when given, else to stdout."""
    if cfg.out is None:
        sys.stdout.write(dump_model(report))
    else:
        write_model(ensure_dir(cfg.out) / filename, report)


def _echo(cfg: RunConfig, text: str) -> None:
    """Human-readable summary; goes to stderr when stdout carries the JSON report."""
    (sys.stdout if cfg.out is not None else sys.stderr).write(text)


def cmd_gen(cfg: RunConfig) -> int:
    out = _require_out(cfg)
    summaries = asyncio.run(CorpusWorkflow(cfg).gen(cfg.inputs[0], out))
    get_logger(__name__).info("gen_finished", scenes=len(summaries), out=str(out), mode=cfg.maps.mode.value)
    return EXIT_OK


def cmd_extract(cfg: RunConfig) -> int:
    out = _require_out(cfg)
    preds = asyncio.run(CorpusWorkflow(cfg).extract(cfg.inputs[0], out))
    get_logger(__name__).info("extract_finished", scenes=len(preds), out=str(out))
    return EXIT_OK


def cmd_loss(cfg: RunConfig) -> int:
    report = asyncio.run(CorpusWorkflow(cfg).loss(cfg.inputs[0], cfg.inputs[1]))
    _emit(cfg, LOSS_REPORT, report)
    return EXIT_OK


def cmd_eval(cfg: RunConfig) -> int:
    report = asyncio.run(CorpusWorkflow(cfg).evaluate(cfg.inputs[0], cfg.inputs[1]))
    table = render_table(report)
    _emit(cfg, EVAL_REPORT, report)
    if cfg.out is not None:
        write_text(cfg.out / EVAL_TABLE, table)
    _echo(cfg, table)
    return EXIT_OK


def render_oracle_summary(report: OracleReport) -> str:
    lines = [f"scenes {report.scene_count}  success {report.success_rate * 100:.2f}%"]
    lines += [f"  {name:<13}{count}" for name, count in report.counts.items()]
    if report.baseline is not None:
        b = report.baseline
        lines.append(
            f"strong-map pick {b.strong_rate * 100:.2f}%  random binary-support pick "
            f"{b.random_binary_rate * 100:.2f}%  margin {b.margin * 100:+.2f} pp (seed {b.seed})"
        )
    return "\n".join(lines) + "\n"


def cmd_oracle(cfg: RunConfig) -> int:
    report = asyncio.run(CorpusWorkflow(cfg).oracle(cfg.inputs[0], cfg.inputs[1]))
    _emit(cfg, ORACLE_REPORT, report)
    _echo(cfg, render_oracle_summary(report))
    return EXIT_OK


def cmd_synth(cfg: RunConfig) -> int:
    out = _require_out(cfg)
    ids = asyncio.run(CorpusWorkflow(cfg).synth(out))
    get_logger(__name__).info("synth_finished", scenes=len(ids), seed=cfg.seed, out=str(out))
    return EXIT_OK


def cmd_viz(cfg: RunConfig) -> int:
    out = _require_out(cfg)
    written = asyncio.run(CorpusWorkflow(cfg).viz(cfg.inputs[0], out, cfg.raster_corpus))
    get_logger(__name__).info("viz_finished", images=written, out=str(out))
    return EXIT_OK


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "gen": cmd_gen,
    "extract": cmd_extract,
    "loss": cmd_loss,
    "eval": cmd_eval,
    "oracle": cmd_oracle,
    "synth": cmd_synth,
    "viz": cmd_viz,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level, args.log_json)
    logger = get_logger(__name__)
    try:
        cfg = run_config_from_args(args)
        return COMMANDS[cfg.command](cfg)
    except ValidationError as e:
        logger.error("invalid_input", command=args.command, error=str(e))
        return EXIT_INPUT
    except GraspMapsError as e:
        logger.error("command_failed", command=args.command, error=str(e), exit_code=e.exit_code)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())

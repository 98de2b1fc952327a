# graspmaps/core/loss.py
"""
Reference grasp-map losses with analytic gradients.

    total      = N * (L(q) + L(cos) + L(sin) + L(width))
    positional = N * (L(q) + L_w(cos) + L_w(sin) + L_w(width))

where L_w weights every element by the ground-truth Q at the same bin and
pixel before reduction. N is the number of angle bins.
"""
from __future__ import annotations

from typing import Dict, Optional

import numpy as np

from graspmaps.config import LossConfig, LossKind, Reduction
from graspmaps.errors import ShapeMismatchError
from graspmaps.models import CHANNELS, GraspMapStack
from graspmaps.schemas import LossBreakdown

# smooth-L1 switches from quadratic to linear here
SMOOTH_L1_BETA = 1.0

WEIGHTED_CHANNELS = ("cos", "sin", "width")


def _elementwise(diff: np.ndarray, kind: LossKind) -> np.ndarray:
    if kind is LossKind.mse:
        return np.square(diff)
    absd = np.abs(diff)
    return np.where(absd < SMOOTH_L1_BETA, 0.5 * np.square(diff) / SMOOTH_L1_BETA, absd - 0.5 * SMOOTH_L1_BETA)


def _elementwise_grad(diff: np.ndarray, kind: LossKind) -> np.ndarray:
    if kind is LossKind.mse:
        return 2.0 * diff
    return np.where(np.abs(diff) < SMOOTH_L1_BETA, diff / SMOOTH_L1_BETA, np.sign(diff))


def _reduce(values: np.ndarray, reduction: Reduction) -> float:
    if values.size == 0:
        return 0.0
    return float(values.sum() if reduction is Reduction.sum else values.mean())


def _reduction_scale(size: int, reduction: Reduction) -> float:
    return 1.0 if reduction is Reduction.sum else 1.0 / max(size, 1)


def channel_loss(
    pred: np.ndarray,
    target: np.ndarray,
    kind: LossKind | str = LossKind.mse,
    weight: Optional[np.ndarray] = None,
    reduction: Reduction | str = Reduction.mean,
) -> float:
    kind, reduction = LossKind(kind), Reduction(reduction)
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape:
        raise ShapeMismatchError(f"prediction shape {pred.shape} != target shape {target.shape}")
    values = _elementwise(pred - target, kind)
    if weight is not None:
        values = values * weight
    return _reduce(values, reduction)


def _weights(gt: GraspMapStack, positional: bool) -> Dict[str, Optional[np.ndarray]]:
    q_hat = np.asarray(gt.q, dtype=np.float64) if positional else None
    return {name: (q_hat if name in WEIGHTED_CHANNELS else None) for name in CHANNELS}


def _check(pred: GraspMapStack, gt: GraspMapStack) -> None:
    if pred.shape != gt.shape:
        raise ShapeMismatchError(f"prediction stack {pred.shape} != ground truth stack {gt.shape}")


def _breakdown(pred: GraspMapStack, gt: GraspMapStack, cfg: LossConfig) -> LossBreakdown:
    _check(pred, gt)
    weights = _weights(gt, cfg.positional)
    per_channel = {
        name: channel_loss(getattr(pred, name), getattr(gt, name), cfg.kind, weights[name], cfg.reduction)
        for name in CHANNELS
    }
    scale = gt.bins
    return LossBreakdown(total=scale * sum(per_channel.values()), per_channel=per_channel, scale=scale)


def total_loss(pred: GraspMapStack, gt: GraspMapStack, kind: LossKind | str = LossKind.mse,
               reduction: Reduction | str = Reduction.mean) -> LossBreakdown:
    return _breakdown(pred, gt, LossConfig(kind=kind, positional=False, reduction=reduction))


def positional_loss(pred: GraspMapStack, gt: GraspMapStack, kind: LossKind | str = LossKind.mse,
                    reduction: Reduction | str = Reduction.mean) -> LossBreakdown:
    return _breakdown(pred, gt, LossConfig(kind=kind, positional=True, reduction=reduction))


def compute_loss(pred: GraspMapStack, gt: GraspMapStack, cfg: LossConfig) -> LossBreakdown:
    return _breakdown(pred, gt, cfg)


def loss_gradient(
    pred: GraspMapStack,
    gt: GraspMapStack,
    kind: LossKind | str = LossKind.mse,
    positional: bool = False,
    reduction: Reduction | str = Reduction.mean,
) -> GraspMapStack:
    """d(loss)/d(pred) for every element, shaped like the stacks."""
    _check(pred, gt)
    kind, reduction = LossKind(kind), Reduction(reduction)
    weights = _weights(gt, positional)
    scale = gt.bins * _reduction_scale(gt.q.size, reduction)
    grads = {}
    for name in CHANNELS:
        diff = np.asarray(getattr(pred, name), dtype=np.float64) - np.asarray(getattr(gt, name), dtype=np.float64)
        g = _elementwise_grad(diff, kind) * scale
        if weights[name] is not None:
            g = g * weights[name]
        grads[name] = g
    return GraspMapStack(**grads)

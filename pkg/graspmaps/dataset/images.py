# graspmaps/dataset/images.py
"""
Raster I/O and network-input preprocessing.

PNG encode/decode goes through OpenCV; depth holes are filled with the
nearest valid pixel using scipy's Euclidean distance transform.
"""
from __future__ import annotations

from pathlib import Path
from typing import Dict, Optional

import cv2
import numpy as np
from scipy import ndimage

from graspmaps.dataset.files import read_bytes, write_bytes
from graspmaps.errors import InputError, InvalidDepthError
from graspmaps.models import PixelMask

COLORMAPS: Dict[str, Optional[int]] = {
    "gray": None,
    "jet": cv2.COLORMAP_JET,
    "viridis": cv2.COLORMAP_VIRIDIS,
    "hot": cv2.COLORMAP_HOT,
    "inferno": cv2.COLORMAP_INFERNO,
}


def encode_png(image: np.ndarray) -> bytes:
    ok, buf = cv2.imencode(".png", image)
    if not ok:
        raise InputError(f"cannot encode image of shape {image.shape} as PNG")
    return buf.tobytes()


def decode_image(data: bytes, what: str = "image") -> np.ndarray:
    image = cv2.imdecode(np.frombuffer(data, dtype=np.uint8), cv2.IMREAD_UNCHANGED)
    if image is None:
        raise InputError(f"cannot decode {what}")
    return image


def read_mask(path: Path) -> PixelMask:
    """Occupancy from a PNG: any nonzero channel marks the pixel occupied."""
    image = decode_image(read_bytes(path), what=str(path))
    if image.ndim == 3:
        return PixelMask((image != 0).any(axis=2))
    return PixelMask(image != 0)


def write_mask(path: Path, mask: PixelMask) -> None:
    write_bytes(path, encode_png(mask.data.astype(np.uint8) * 255))


def read_rgb(path: Path) -> np.ndarray:
    image = decode_image(read_bytes(path), what=str(path))
    if image.ndim != 3 or image.shape[2] < 3:
        raise InputError(f"{path}: expected a colour image, got shape {image.shape}")
    return cv2.cvtColor(image[:, :, :3], cv2.COLOR_BGR2RGB)


def read_depth(path: Path) -> np.ndarray:
    image = decode_image(read_bytes(path), what=str(path))
    if image.ndim != 2:
        raise InputError(f"{path}: expected a single-channel depth image, got shape {image.shape}")
    return image.astype(np.float64)


def preprocess_rgb(raster: np.ndarray) -> np.ndarray:
    """Scale to [0, 1] and subtract the per-channel image mean."""
    arr = np.asarray(raster)
    if np.issubdtype(arr.dtype, np.integer):
        scaled = arr.astype(np.float64) / float(np.iinfo(arr.dtype).max)
    else:
        scaled = arr.astype(np.float64)
    if not np.isfinite(scaled).all():
        raise InputError("rgb raster contains NaN or Inf")
    if scaled.ndim == 3:
        return scaled - scaled.mean(axis=(0, 1), keepdims=True)
    return scaled - scaled.mean()


def invalid_depth(depth: np.ndarray) -> np.ndarray:
    """Zero is the sensor's no-reading marker."""
    return (depth == 0) | ~np.isfinite(depth)


def inpaint_depth(depth: np.ndarray) -> np.ndarray:
    """Fill every invalid pixel with the value of its nearest valid pixel."""
    depth = np.asarray(depth, dtype=np.float64)
    holes = invalid_depth(depth)
    if holes.all():
        raise InvalidDepthError("depth image has no valid pixel")
    if not holes.any():
        return depth.copy()
    rows, cols = ndimage.distance_transform_edt(holes, return_distances=False, return_indices=True)
    return depth[rows, cols]


def preprocess_depth(depth: np.ndarray) -> np.ndarray:
    filled = inpaint_depth(depth)
    lo, hi = float(filled.min()), float(filled.max())
    if hi > lo:
        scaled = 2.0 * (filled - lo) / (hi - lo) - 1.0
    else:
        scaled = np.zeros_like(filled)
    return np.clip(scaled - scaled.mean(), -1.0, 1.0)


def render_heatmap(raster: np.ndarray, colormap: str = "jet", vmin: float = 0.0, vmax: float = 1.0) -> bytes:
    """8-bit PNG of a single channel; values are clipped to [vmin, vmax]."""
    if colormap not in COLORMAPS:
        raise InputError(f"unknown colormap {colormap!r}; choose from {sorted(COLORMAPS)}")
    if not vmax > vmin:
        raise InputError(f"vmax ({vmax}) must exceed vmin ({vmin})")
    arr = np.nan_to_num(np.asarray(raster, dtype=np.float64), nan=vmin, posinf=vmax, neginf=vmin)
    levels = np.rint(np.clip((arr - vmin) / (vmax - vmin), 0.0, 1.0) * 255.0).astype(np.uint8)
    code = COLORMAPS[colormap]
    return encode_png(levels if code is None else cv2.applyColorMap(levels, code))


def render_rgb(raster: np.ndarray, vmin: float = -1.0, vmax: float = 1.0) -> bytes:
    """8-bit colour PNG of an (h, w, 3) RGB raster; values are clipped to [vmin, vmax]."""
    arr = np.asarray(raster, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise InputError(f"expected an (h, w, 3) raster, got shape {arr.shape}")
    if not vmax > vmin:
        raise InputError(f"vmax ({vmax}) must exceed vmin ({vmin})")
    levels = np.rint(np.clip((arr - vmin) / (vmax - vmin), 0.0, 1.0) * 255.0).astype(np.uint8)
    return encode_png(cv2.cvtColor(levels, cv2.COLOR_RGB2BGR))

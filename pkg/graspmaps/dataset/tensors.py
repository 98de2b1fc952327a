# graspmaps/dataset/tensors.py
"""
GMAP1 grasp-map tensor files.

    b"GMAP1" | 4 x uint32 LE dims (4, bins, h, w) | float32 LE payload

Channel order is q, cos, sin, width; the payload is row-major. Byte order is
fixed, so files are identical across hosts.
"""
from __future__ import annotations

from pathlib import Path
from typing import List

import numpy as np

from graspmaps.dataset.files import read_bytes, write_bytes
from graspmaps.errors import StorageError, TensorFormatError
from graspmaps.models import CHANNELS, GraspMapStack

MAGIC = b"GMAP1"
DIMS_DTYPE = np.dtype("<u4")
PAYLOAD_DTYPE = np.dtype("<f4")
HEADER_SIZE = len(MAGIC) + 4 * DIMS_DTYPE.itemsize
SUFFIX = ".gmap"


def write_tensor(stack: GraspMapStack) -> bytes:
    payload = np.ascontiguousarray(stack.to_array(), dtype=PAYLOAD_DTYPE)
    if not np.isfinite(payload).all():
        raise TensorFormatError("grasp maps contain NaN or Inf (or values beyond float32 range)")
    dims = np.array((len(CHANNELS), stack.bins, stack.h, stack.w), dtype=DIMS_DTYPE)
    return MAGIC + dims.tobytes() + payload.tobytes()


def read_tensor(data: bytes) -> GraspMapStack:
    if len(data) < HEADER_SIZE:
        raise TensorFormatError(f"truncated header: {len(data)} bytes, need {HEADER_SIZE}")
    if data[: len(MAGIC)] != MAGIC:
        raise TensorFormatError(f"bad magic {data[:len(MAGIC)]!r}, expected {MAGIC!r}")
    dims = np.frombuffer(data, dtype=DIMS_DTYPE, count=4, offset=len(MAGIC))
    channels, bins, h, w = (int(d) for d in dims)
    if channels != len(CHANNELS):
        raise TensorFormatError(f"expected {len(CHANNELS)} channels, header says {channels}")
    if min(bins, h, w) == 0:
        raise TensorFormatError(f"header has a zero dimension: {(channels, bins, h, w)}")

    expected = channels * bins * h * w * PAYLOAD_DTYPE.itemsize
    actual = len(data) - HEADER_SIZE
    if actual != expected:
        raise TensorFormatError(f"payload length mismatch: {actual} bytes, header implies {expected}")

    arr = np.frombuffer(data, dtype=PAYLOAD_DTYPE, offset=HEADER_SIZE).reshape(channels, bins, h, w)
    if not np.isfinite(arr).all():
        raise TensorFormatError("payload contains NaN or Inf")
    return GraspMapStack.from_array(arr.astype(np.float32))


def save_tensor(path: Path, stack: GraspMapStack) -> None:
    write_bytes(path, write_tensor(stack))


def load_tensor(path: Path) -> GraspMapStack:
    try:
        return read_tensor(read_bytes(path))
    except TensorFormatError as e:
        raise TensorFormatError(f"{path}: {e}") from e


def tensor_path(out_dir: Path, scene_id: str) -> Path:
    return Path(out_dir) / f"{scene_id}{SUFFIX}"


def scene_id_of(path: Path) -> str:
    name = Path(path).name
    return name[: -len(SUFFIX)] if name.endswith(SUFFIX) else Path(path).stem


def list_tensors(tensor_dir: Path) -> List[Path]:
    tensor_dir = Path(tensor_dir)
    if not tensor_dir.is_dir():
        raise StorageError(f"tensor directory {tensor_dir} does not exist")
    return sorted(tensor_dir.glob(f"*{SUFFIX}"))

# graspmaps/models.py
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from graspmaps.errors import ShapeMismatchError

CHANNELS = ("q", "cos", "sin", "width")


@dataclass(frozen=True, eq=False)
class PixelMask:
    """Row-major boolean occupancy grid, shape (height, width)."""

    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.data)
        if arr.ndim != 2:
            raise ShapeMismatchError(f"mask must be 2-D, got shape {arr.shape}")
        object.__setattr__(self, "data", arr.astype(bool, copy=False))

    @classmethod
    def empty(cls, height: int, width: int) -> "PixelMask":
        return cls(np.zeros((height, width), dtype=bool))

    @property
    def height(self) -> int:
        return int(self.data.shape[0])

    @property
    def width(self) -> int:
        return int(self.data.shape[1])

    @property
    def count(self) -> int:
        return int(self.data.sum())

    def any(self) -> bool:
        return bool(self.data.any())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PixelMask):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.array_equal(self.data, other.data))

    def __or__(self, other: "PixelMask") -> "PixelMask":
        return PixelMask(self.data | other.data)


@dataclass(frozen=True, eq=False)
class GraspMapStack:
    """
    N-bin grasp maps: q, cos, sin, width, each shaped (N, h, w).
    Width is stored normalised by w_max.
    """

    q: np.ndarray
    cos: np.ndarray
    sin: np.ndarray
    width: np.ndarray

    def __post_init__(self) -> None:
        shape = None
        for name in CHANNELS:
            arr = np.asarray(getattr(self, name))
            if arr.ndim != 3:
                raise ShapeMismatchError(f"channel {name} must be (bins, h, w), got {arr.shape}")
            if not np.issubdtype(arr.dtype, np.floating):
                arr = arr.astype(np.float64)
            if shape is None:
                shape = arr.shape
            elif arr.shape != shape:
                raise ShapeMismatchError(f"channel {name} has shape {arr.shape}, expected {shape}")
            object.__setattr__(self, name, arr)

    @classmethod
    def zeros(cls, bins: int, h: int, w: int, dtype: type = np.float64) -> "GraspMapStack":
        return cls(*(np.zeros((bins, h, w), dtype=dtype) for _ in CHANNELS))

    @classmethod
    def from_array(cls, array: np.ndarray) -> "GraspMapStack":
        """Build from a (4, bins, h, w) array in channel order q, cos, sin, width."""
        if array.ndim != 4 or array.shape[0] != len(CHANNELS):
            raise ShapeMismatchError(f"expected (4, bins, h, w), got {array.shape}")
        return cls(*(array[i] for i in range(len(CHANNELS))))

    @property
    def shape(self) -> Tuple[int, int, int]:
        return tuple(self.q.shape)  # type: ignore[return-value]

    @property
    def bins(self) -> int:
        return int(self.q.shape[0])

    @property
    def h(self) -> int:
        return int(self.q.shape[1])

    @property
    def w(self) -> int:
        return int(self.q.shape[2])

    def to_array(self) -> np.ndarray:
        return np.stack([getattr(self, name) for name in CHANNELS])

    def astype(self, dtype: type) -> "GraspMapStack":
        return GraspMapStack(*(getattr(self, name).astype(dtype) for name in CHANNELS))

    def require_same_shape(self, other: "GraspMapStack") -> None:
        if self.shape != other.shape:
            raise ShapeMismatchError(f"stack shapes differ: {self.shape} vs {other.shape}")

    def equals(self, other: "GraspMapStack") -> bool:
        return self.shape == other.shape and all(
            np.array_equal(getattr(self, n), getattr(other, n)) for n in CHANNELS
        )

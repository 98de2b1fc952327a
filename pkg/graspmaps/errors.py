# graspmaps/errors.py
from __future__ import annotations

from typing import Dict, Iterable, List, Optional

EXIT_OK = 0
EXIT_IO = 1
EXIT_INPUT = 2


class GraspMapsError(Exception):
    """Base class for every error raised by graspmaps."""

    exit_code = EXIT_INPUT


class InputError(GraspMapsError, ValueError):
    """Bad annotations, tensors, configs or predictions. Maps to exit code 2."""

    exit_code = EXIT_INPUT


class StorageError(GraspMapsError, OSError):
    """Reading or writing files failed. Maps to exit code 1."""

    exit_code = EXIT_IO


class AnnotationParseError(InputError):
    def __init__(self, reason: str, line: Optional[int] = None, path: Optional[str] = None) -> None:
        self.reason = reason
        self.line = line
        self.path = path
        where = []
        if path:
            where.append(path)
        if line is not None:
            where.append(f"line {line}")
        prefix = ":".join(where)
        super().__init__(f"{prefix}: {reason}" if prefix else reason)


class EmptyAnnotationError(InputError):
    pass


class TensorFormatError(InputError):
    pass


class ShapeMismatchError(InputError):
    pass


class UndefinedAngleError(InputError):
    pass


class NoGraspError(InputError):
    pass


class InvalidDepthError(InputError):
    pass


class SynthesisError(InputError):
    """Synthetic scene parameters leave no room for the requested grasps."""


class _MissingForScenes(InputError):
    what = "item"

    def __init__(self, scene_ids: Iterable[str]) -> None:
        self.scene_ids: List[str] = sorted(scene_ids)
        shown = ", ".join(self.scene_ids[:10])
        more = f" (+{len(self.scene_ids) - 10} more)" if len(self.scene_ids) > 10 else ""
        super().__init__(f"missing {self.what} for {len(self.scene_ids)} scene(s): {shown}{more}")


class MissingPredictionError(_MissingForScenes):
    what = "prediction"


class MissingMaskError(_MissingForScenes):
    what = "mask"


class AnnotationBatchError(InputError):
    """Several annotation files failed; `failures` maps each path to its reason."""

    def __init__(self, failures: Dict[str, str]) -> None:
        self.failures = dict(sorted(failures.items()))
        lines = [f"{len(self.failures)} annotation file(s) rejected:"]
        lines += [f"  {path}: {reason}" for path, reason in self.failures.items()]
        super().__init__("\n".join(lines))

# graspmaps/dataset/annotations.py
"""
Annotation files.

Text form, one grasp per line (UTF-8, LF or CRLF, blank lines skipped):

    x;y;theta_degrees;opening;jaw_size

Identical lines are kept once. The JSON mirror (grasps.json) is an
AnnotationRecord and carries the image size itself.
"""
from __future__ import annotations

import math
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from graspmaps.dataset.files import read_text, write_text
from graspmaps.errors import AnnotationParseError, EmptyAnnotationError
from graspmaps.models import PixelMask
from graspmaps.schemas import AnnotationGrasp, AnnotationRecord, GraspRectangle, GraspScene

FIELD_SEP = ";"
FIELDS = ("x", "y", "theta", "opening", "jaw_size")


def _parse_line(line: str, lineno: int, path: Optional[str]) -> AnnotationGrasp:
    parts = [p.strip() for p in line.split(FIELD_SEP)]
    if len(parts) != len(FIELDS):
        raise AnnotationParseError(f"expected {len(FIELDS)} fields separated by ';', got {len(parts)}", lineno, path)
    try:
        values = [float(p) for p in parts]
    except ValueError as e:
        raise AnnotationParseError(f"non-numeric field in {line!r}", lineno, path) from e
    if not all(math.isfinite(v) for v in values):
        raise AnnotationParseError(f"non-finite field in {line!r}", lineno, path)
    try:
        return AnnotationGrasp(**dict(zip(FIELDS, values)))
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(loc) for loc in first["loc"])
        raise AnnotationParseError(f"{field}: {first['msg']}", lineno, path) from e


def parse_annotations(
    text: str,
    *,
    scene_id: str,
    image_h: int,
    image_w: int,
    mask: Optional[PixelMask] = None,
    path: Optional[str] = None,
) -> GraspScene:
    seen = set()
    grasps: List[GraspRectangle] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line in seen:
            continue
        seen.add(line)
        rect = _parse_line(line, lineno, path).to_rect()
        if not (0.0 <= rect.cx < image_w and 0.0 <= rect.cy < image_h):
            raise AnnotationParseError(
                f"centre ({rect.cx:g}, {rect.cy:g}) outside {image_w}x{image_h} image", lineno, path
            )
        grasps.append(rect)
    if not grasps:
        raise EmptyAnnotationError(f"{path or scene_id}: no grasps")
    return GraspScene(scene_id=scene_id, image_h=image_h, image_w=image_w, grasps=grasps, mask=mask)


def serialize_annotations(scene: GraspScene) -> str:
    """Text form of the scene's grasps; floats use repr so nothing is rounded away."""
    lines = []
    for g in scene.grasps:
        rec = AnnotationGrasp.from_rect(g)
        lines.append(FIELD_SEP.join(repr(float(v)) for v in (rec.x, rec.y, rec.theta, rec.opening, rec.jaw_size)))
    return "\n".join(lines) + ("\n" if lines else "")


def read_annotation_text(path: Path, *, scene_id: str, image_h: int, image_w: int,
                         mask: Optional[PixelMask] = None) -> GraspScene:
    try:
        text = read_text(path)
    except UnicodeDecodeError as e:
        raise AnnotationParseError(f"not UTF-8: {e}", path=str(path)) from e
    return parse_annotations(text, scene_id=scene_id, image_h=image_h, image_w=image_w, mask=mask, path=str(path))


def read_annotation_json(path: Path) -> AnnotationRecord:
    try:
        return AnnotationRecord.model_validate_json(read_text(path))
    except UnicodeDecodeError as e:
        raise AnnotationParseError(f"not UTF-8: {e}", path=str(path)) from e
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(loc) for loc in first["loc"]) or "document"
        raise AnnotationParseError(f"{where}: {first['msg']}", path=str(path)) from e


def record_to_scene(record: AnnotationRecord, mask: Optional[PixelMask] = None,
                    path: Optional[str] = None) -> GraspScene:
    if not record.grasps:
        raise EmptyAnnotationError(f"{path or record.scene_id}: no grasps")
    # dedupe like the text parser does, keeping first occurrences
    unique = list(dict.fromkeys(g.model_dump_json() for g in record.grasps))
    record = record.model_copy(update={"grasps": [AnnotationGrasp.model_validate_json(g) for g in unique]})
    try:
        return record.to_scene(mask)
    except ValidationError as e:
        raise AnnotationParseError(e.errors()[0]["msg"], path=path) from e


def write_annotations(path: Path, scene: GraspScene) -> None:
    write_text(path, serialize_annotations(scene))

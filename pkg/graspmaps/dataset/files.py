# graspmaps/dataset/files.py
from __future__ import annotations

import json
from pathlib import Path

from pydantic import BaseModel

from graspmaps.errors import StorageError


def read_bytes(path: Path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise StorageError(f"cannot read {path}: {e}") from e


def write_bytes(path: Path, data: bytes) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
    except OSError as e:
        raise StorageError(f"cannot write {path}: {e}") from e


def read_text(path: Path) -> str:
    # utf-8-sig drops a leading BOM if an editor added one
    return read_bytes(path).decode("utf-8-sig")


def write_text(path: Path, text: str) -> None:
    write_bytes(path, text.encode("utf-8"))


def dump_model(model: BaseModel) -> str:
    """Stable JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(model.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def write_model(path: Path, model: BaseModel) -> None:
    write_text(path, dump_model(model))


def ensure_dir(path: Path) -> Path:
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise StorageError(f"cannot create directory {path}: {e}") from e
    return path

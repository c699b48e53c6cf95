"""File writers shared by the command line and the reports.

JSON documents are written from pydantic models or plain dicts with a
trailing newline, so repeated runs produce byte-identical files.
"""

import json
from pathlib import Path

import structlog
from pydantic import BaseModel

from shared.exceptions import DataFileError

logger = structlog.get_logger(__name__)


def to_json_text(data: BaseModel | dict | list | None) -> str:
    """Render ``data`` as indented JSON text.

    Floats keep full precision (shortest round-tripping representation).
    """
    if isinstance(data, BaseModel):
        return data.model_dump_json(indent=2) + "\n"
    return json.dumps(data, indent=2, allow_nan=False) + "\n"


def _write(path: Path, text: str, kind: str) -> Path:
    """Create the parent directories and write ``text``.

    Raises:
        DataFileError: the directory or file cannot be created, e.g. a path
            component is an existing regular file.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise DataFileError(path, reason=f"cannot write ({exc.strerror or exc})") from exc
    logger.debug("file_written", path=str(path), kind=kind)
    return path


def write_json(path: Path, data: BaseModel | dict | list | None) -> Path:
    return _write(path, to_json_text(data), "json")


def write_text(path: Path, text: str) -> Path:
    return _write(path, text, "text")

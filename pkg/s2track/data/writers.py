"""Atomic writers for trajectory tables, summaries and certificates."""

import os
import tempfile
from pathlib import Path
from typing import Any, Union

import pandas as pd

from s2track.utils.serialization import dumps

CSV_FLOAT_FORMAT = "%.17g"


def write_text_atomic(filepath: Union[str, Path], text: str) -> Path:
    """
    Write ``text`` to ``filepath`` through a temporary file in the same directory.

    The destination either keeps its previous content or receives the full new
    content; an interrupted write leaves no partial file behind.

    Returns:
        The destination path
    """
    filepath = Path(filepath)
    filepath.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{filepath.name}.", suffix=".tmp", dir=filepath.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, filepath)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return filepath


def trajectory_csv(frame: pd.DataFrame) -> str:
    """CSV text with a header row, LF line endings and 17 significant digits."""
    return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def write_csv(frame: pd.DataFrame, filepath: Union[str, Path]) -> Path:
    return write_text_atomic(filepath, trajectory_csv(frame))


def json_text(payload: Any) -> str:
    """
    Sorted, indented JSON followed by a newline.

    Non-finite floats are written as the strings ``"inf"``, ``"-inf"`` and
    ``"nan"`` so that strict parsers accept the document.
    """
    return dumps(payload) + "\n"


def write_json(payload: Any, filepath: Union[str, Path]) -> Path:
    return write_text_atomic(filepath, json_text(payload))

"""Loaders for the documented CSV/JSON artifact files.

Each figure declares the files it needs; loading is strict (missing files or
unexpected headers raise ReportError) so a truncated run directory fails
loudly instead of producing empty plots.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

__all__ = ["ReportError", "read_csv_columns", "read_json"]


class ReportError(RuntimeError):
    pass


def read_csv_columns(path: Path, expected_header: str) -> dict[str, np.ndarray]:
    """Read a headered CSV into float columns keyed by column name."""
    if not path.is_file():
        raise ReportError(f"missing input file: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ReportError(f"empty input file: {path}")
        if ",".join(header) != expected_header:
            raise ReportError(
                f"{path}: expected header {expected_header!r}, "
                f"got {','.join(header)!r}")
        rows = list(reader)
    if not rows:
        raise ReportError(f"{path}: no data rows")
    try:
        data = np.array([[float(v) for v in row] for row in rows])
    except ValueError as exc:
        raise ReportError(f"{path}: non-numeric data: {exc}") from exc
    return {name: data[:, j] for j, name in enumerate(header)}


def read_json(path: Path, required_keys=()) -> dict:
    if not path.is_file():
        raise ReportError(f"missing input file: {path}")
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ReportError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ReportError(f"{path}: expected a JSON object")
    missing = [k for k in required_keys if k not in obj]
    if missing:
        raise ReportError(f"{path}: missing keys {missing}")
    return obj

"""Deterministic result files.

CSV files carry a commented header block (schema version, code
version, the effective configuration as canonical JSON, and a
timestamp on its own line) followed by one fixed-order column row and
the data. Floats are written with ``repr``, the shortest exact
round-trip form, so reruns with identical configuration reproduce
identical bytes except for the timestamp line. JSON files hold the
full nested records under the same header keys with sorted keys
throughout.

Relative output paths are resolved against the directory named by the
``DRIVENCHAIN_OUTPUT_DIR`` environment variable when it is set,
otherwise against the working directory.
"""

from __future__ import annotations

import csv
import json
import math
import os
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

__all__ = [
    "SCHEMA_VERSION",
    "OUTPUT_DIR_ENV",
    "SWEEP_COLUMNS",
    "resolve_output_path",
    "CsvReport",
    "write_csv",
    "write_json",
]

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "DRIVENCHAIN_OUTPUT_DIR"

# Fixed column order of sweep-style tables.
SWEEP_COLUMNS = (
    "N",
    "delta",
    "f",
    "gamma",
    "B",
    "solver",
    "J",
    "S",
    "purity",
    "converged",
    "residual",
)


def _code_version() -> str:
    from drivenchain import __version__

    return __version__


def resolve_output_path(path) -> Path:
    """Anchor a relative path at the configured output directory."""
    path = Path(path)
    if not path.is_absolute():
        base = os.environ.get(OUTPUT_DIR_ENV)
        if base:
            path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _jsonable(value):
    """Coerce numpy scalars and arrays for json.dumps."""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return "nan" if math.isnan(v) else repr(v)
    if isinstance(value, (np.integer, int)):
        return str(int(value))
    if value is None:
        return ""
    return str(value)


def _header_lines(config) -> list:
    lines = [
        f"# schema_version: {SCHEMA_VERSION}",
        f"# code_version: {_code_version()}",
    ]
    if config is not None:
        lines.append("# config: " + json.dumps(config, sort_keys=True, default=_jsonable))
    lines.append("# timestamp: " + datetime.now(timezone.utc).isoformat(timespec="seconds"))
    return lines


class CsvReport:
    """Incrementally written CSV table with a metadata header.

    Rows are flushed as they arrive, so a partially completed sweep
    leaves a valid, resumable file behind. Use as a context manager or
    call `close` explicitly.
    """

    def __init__(self, path, columns=SWEEP_COLUMNS, config=None):
        self.path = resolve_output_path(path)
        self.columns = tuple(columns)
        self._handle = open(self.path, "w", newline="")
        for line in _header_lines(config):
            self._handle.write(line + "\n")
        self._writer = csv.writer(self._handle)
        self._writer.writerow(self.columns)
        self._handle.flush()
        self.rows_written = 0

    def append(self, row: dict):
        """Write one row, taking values by column name."""
        self._writer.writerow([_format_cell(row.get(col)) for col in self.columns])
        self._handle.flush()
        self.rows_written += 1

    def close(self):
        if not self._handle.closed:
            self._handle.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False


def write_csv(path, rows, columns=SWEEP_COLUMNS, config=None) -> Path:
    """Write a complete table in one call; returns the resolved path."""
    with CsvReport(path, columns=columns, config=config) as report:
        for row in rows:
            report.append(row)
        return report.path


def write_json(path, results, config=None) -> Path:
    """Write full nested records with the standard metadata envelope."""
    path = resolve_output_path(path)
    document = {
        "schema_version": SCHEMA_VERSION,
        "code_version": _code_version(),
        "config": config,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "results": results,
    }
    with open(path, "w") as handle:
        json.dump(document, handle, sort_keys=True, indent=2, default=_jsonable)
        handle.write("\n")
    return path

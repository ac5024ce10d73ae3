"""Structured verification reports and deterministic serialization.

Every check in the toolkit returns an :class:`EstimateReport`: per-sample
rows, a summary of measured constants / fitted exponents / tail
certificates, and a pass flag against the tolerances that were used.
Serialization is deterministic: numpy scalars are converted to Python
numbers, floats are written with shortest round-trip repr, keys keep a
fixed order, and files are written atomically (temp file + rename).
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "EstimateReport",
    "pyify",
    "atomic_write_text",
    "atomic_write_bytes",
    "csv_text",
    "write_csv",
]


def pyify(obj):
    """Recursively convert numpy scalars/arrays to plain Python values."""
    if isinstance(obj, dict):
        return {k: pyify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [pyify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [pyify(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.complexfloating,)):
        return [float(obj.real), float(obj.imag)]
    return obj


@dataclass
class EstimateReport:
    """Outcome of one verification run."""

    check: str
    params: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    samples: list = field(default_factory=list)
    passed: bool = True

    def to_jsonable(self, config: dict | None = None) -> dict:
        out = {
            "check": self.check,
            "passed": bool(self.passed),
            "params": pyify(self.params),
            "tolerances": pyify(self.tolerances),
            "summary": pyify(self.summary),
            "samples": pyify(self.samples),
        }
        if config is not None:
            out["config"] = pyify(config)
        return out

    def to_json(self, config: dict | None = None) -> str:
        return json.dumps(self.to_jsonable(config), indent=2, sort_keys=True) + "\n"

    def sample_fields(self) -> list[str]:
        fields: list[str] = []
        for row in self.samples:
            for key in row:
                if key not in fields:
                    fields.append(key)
        return fields


def _format_cell(v) -> str:
    v = pyify(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return ";".join(_format_cell(x) for x in v)
    return str(v)


def csv_text(fieldnames: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fieldnames)
    for row in rows:
        writer.writerow([_format_cell(row.get(k, "")) for k in fieldnames])
    return buf.getvalue()


def atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-czkit-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_bytes(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-czkit-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, fieldnames: list[str], rows: list[dict]) -> None:
    atomic_write_text(path, csv_text(fieldnames, rows))

"""Output records as JSON lines or CSV.

Floats are written with 17 significant digits (enough to round-trip any
double), infinities as ``Infinity``/``-Infinity`` and NaN as ``NaN``, the
same extensions Python's :mod:`json` reads back.  Formatting is a pure
function of the values, so parsing an emitted file and writing it again
reproduces it byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable

import numpy as np

# leading fields in schema order; anything else follows in insertion order
FIELD_ORDER = (
    "experiment",
    "params",
    "exact",
    "estimate",
    "std_error",
    "z_score",
    "pass",
    "seed",
    "n_samples",
    "workers",
    "runtime_ms",
)


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _plain(v):
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    return v


def dumps(value) -> str:
    """Compact JSON text with fixed float formatting."""
    value = _plain(value)
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(str(k), ensure_ascii=False)}: {dumps(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in value) + "]"
    raise TypeError(f"cannot serialise {type(value).__name__}")


def ordered(record: dict) -> dict:
    head = {k: record[k] for k in FIELD_ORDER if k in record}
    return {**head, **{k: v for k, v in record.items() if k not in head}}


def to_json_lines(records: Iterable[dict]) -> str:
    return "".join(dumps(ordered(r)) + "\n" for r in records)


def _flatten(record: dict) -> dict:
    flat = {}
    for k, v in ordered(record).items():
        v = _plain(v)
        if isinstance(v, dict):
            for pk, pv in v.items():
                flat[f"{k}.{pk}"] = pv
        else:
            flat[k] = v
    return flat


def _cell(v) -> str:
    v = _plain(v)
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format_float(v)
    if isinstance(v, (list, tuple, dict)):
        return dumps(v)
    return str(v)


def to_csv(records: Iterable[dict]) -> str:
    """One header row with the union of the flattened fields (params.* expanded)."""
    rows = [_flatten(r) for r in records]
    header: list[str] = []
    for row in rows:
        header.extend(k for k in row if k not in header)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row.get(k)) for k in header])
    return buf.getvalue()


def render(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        return to_json_lines(records)
    if fmt == "csv":
        return to_csv(records)
    raise ValueError(f"unknown output format {fmt!r}")

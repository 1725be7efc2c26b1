"""
reports.py

CSV and JSON rendering for command output.

Every row is a flat dict. Floats are written in shortest round-trip form
(``repr``), booleans as ``true``/``false`` and missing values as empty CSV
fields or JSON ``null``. JSON output is a flat array of row objects.
"""

import csv
import io
import json
import logging
import sys
from dataclasses import asdict, is_dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

logger = logging.getLogger(__name__)

POWER_COLUMNS = (
    "gate", "d", "assisted", "method", "entropy", "value", "stderr", "samples", "seed", "runtime_ms",
)
SPIN_COLUMNS = ("theta", "j", "d", "E_linear")
MAXIMA_COLUMNS = ("d", "j", "index", "grid_theta", "grid_value", "theta", "value")
TABLE_COLUMNS = (
    "gate", "d", "quantity", "exact", "closed_form", "schmidt", "trace", "deviation", "note",
)
CHECK_COLUMNS = (
    "suite", "name", "d", "value", "expected", "deviation", "tolerance", "passed", "detail",
)
ASYMPTOTIC_COLUMNS = (
    "gate", "d", "bar_ep", "leading", "residual", "bar_ep_anc", "leading_anc", "residual_anc",
    "shrinking", "vn_ep", "vn_ep_anc",
)

FORMATS = ("csv", "json")


class ReportEncoder(json.JSONEncoder):
    """JSON encoder for numpy scalars and arrays."""

    def default(self, obj):
        if isinstance(obj, np.bool_):
            return bool(obj)
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        return super().default(obj)


def as_row(item: Any) -> Dict[str, Any]:
    if isinstance(item, dict):
        return dict(item)
    if hasattr(item, "as_dict"):
        return item.as_dict()
    if is_dataclass(item):
        return asdict(item)
    raise TypeError(f"cannot turn {type(item).__name__} into a report row")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def to_csv(rows: Iterable[Any], columns: Sequence[str]) -> str:
    """Header row always present, even for an empty table."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        row = as_row(row)
        writer.writerow({c: _cell(row.get(c)) for c in columns})
    return buf.getvalue()


def to_json(rows: Iterable[Any], columns: Optional[Sequence[str]] = None) -> str:
    out: List[Dict[str, Any]] = []
    for row in rows:
        row = as_row(row)
        if columns is not None:
            row = {c: row.get(c) for c in columns}
        out.append(row)
    return json.dumps(out, indent=2, cls=ReportEncoder) + "\n"


def render(rows: Iterable[Any], columns: Sequence[str], fmt: str = "csv") -> str:
    if fmt == "csv":
        return to_csv(rows, columns)
    if fmt == "json":
        return to_json(rows, columns)
    raise ValueError(f"unknown output format {fmt!r}; use one of {', '.join(FORMATS)}")


def write_output(text: str, out: Optional[str] = None) -> None:
    """Write to ``out`` (parent directories created) or to stdout."""
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info("Wrote %s", path)


__all__ = [
    "ASYMPTOTIC_COLUMNS",
    "CHECK_COLUMNS",
    "FORMATS",
    "MAXIMA_COLUMNS",
    "POWER_COLUMNS",
    "ReportEncoder",
    "SPIN_COLUMNS",
    "TABLE_COLUMNS",
    "as_row",
    "render",
    "to_csv",
    "to_json",
    "write_output",
]

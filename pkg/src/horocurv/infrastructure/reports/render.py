"""Report Rendering

Deterministic JSON and CSV text for report payloads.
"""

import csv
import io
import json
from typing import Any, Dict, Iterable, List


def render_json(data: Dict[str, Any]) -> str:
    """Indented JSON with sorted keys and a trailing newline"""
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=True) + "\n"


def render_csv(rows: Iterable[Dict[str, Any]]) -> str:
    """CSV with a header row; columns in first-seen order across all rows"""
    rows = list(rows)
    columns: List[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: _cell(row.get(key)) for key in columns})
    return buffer.getvalue()


def _cell(value: Any) -> Any:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value

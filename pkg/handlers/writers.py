"""CSV and JSON output with a reproducible metadata block.

CSV files open with ``# key=value`` lines followed by one header row.
JSON files hold ``{"meta": {...}, "rows": [...]}`` with the same metadata
mapping. Floats are written with 17 significant digits.
"""
import csv
import io
import json
import math
from dataclasses import fields, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from utils import ConfigurationError

META_PREFIX = "# "


def format_value(value: Any) -> str:
    if isinstance(value, np.generic):
        value = value.item()
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def row_values(row: Any) -> list[Any]:
    if is_dataclass(row):
        return [getattr(row, f.name) for f in fields(row)]
    return list(row)


def render_csv(meta: dict[str, str], columns: Sequence[str], rows: Iterable[Any]) -> str:
    buffer = io.StringIO()
    for key, value in meta.items():
        buffer.write(f"{META_PREFIX}{key}={value}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row_values(row)])
    return buffer.getvalue()


def _json_scalar(value: Any) -> str:
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float):
        if math.isnan(value):
            return "NaN"
        if math.isinf(value):
            return "Infinity" if value > 0 else "-Infinity"
        return format(value, ".17g")
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, int) and not isinstance(value, Enum):
        return str(value)
    return json.dumps(format_value(value))


def render_json(meta: dict[str, str], columns: Sequence[str], rows: Iterable[Any]) -> str:
    # json.dumps would print repr() floats; 17 significant digits are written by hand
    lines = ['{"meta": ' + json.dumps(meta) + ', "rows": [']
    records = []
    for row in rows:
        pairs = (f"{json.dumps(name)}: {_json_scalar(v)}" for name, v in zip(columns, row_values(row)))
        records.append("  {" + ", ".join(pairs) + "}")
    lines.append(",\n".join(records))
    lines.append("]}")
    return "\n".join(lines) + "\n"


def render(fmt: str, meta: dict[str, str], columns: Sequence[str], rows: Iterable[Any]) -> str:
    if fmt == "json":
        return render_json(meta, columns, rows)
    return render_csv(meta, columns, rows)


def emit(text: str, out: Path | None, stream) -> None:
    """Write the rendered text to ``out``, or to ``stream`` when no path is set."""
    if out is None:
        stream.write(text)
        return
    Path(out).write_text(text, encoding="utf-8", newline="")


def read_header(path: str | Path) -> dict[str, str]:
    """Metadata mapping of a previous output file, CSV or JSON."""
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"replay file not found: {path}")
    text = path.read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        try:
            meta = json.loads(text)["meta"]
        except (ValueError, KeyError) as exc:
            raise ConfigurationError(f"{path} has no readable meta block") from exc
        return {str(k): str(v) for k, v in meta.items()}

    meta = {}
    for line in text.splitlines():
        if not line.startswith(META_PREFIX):
            break
        key, sep, value = line[len(META_PREFIX):].partition("=")
        if not sep:
            raise ConfigurationError(f"malformed metadata line in {path}: {line!r}")
        meta[key] = value
    if not meta:
        raise ConfigurationError(f"{path} has no metadata block")
    return meta

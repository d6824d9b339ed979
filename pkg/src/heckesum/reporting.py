"""Stable text serialisation for reports and scan tables.

Floats are always rendered with 17 significant digits and a '.' decimal
point, so identical runs produce byte-identical output regardless of
locale or worker count.  Timing fields are the one intentionally
volatile part of a report; comparisons should strip them.
"""

from __future__ import annotations

from typing import Any, IO

SCAN_COLUMNS = (
    "X",
    "Y",
    "s2",
    "m0",
    "cand_paper_pointwise",
    "cand_mellin",
    "ratio_s2_m0",
    "err_envelope_theta",
    "seconds",
    "terms",
)

SCAN_HEADER = ",".join(SCAN_COLUMNS)

VOLATILE_KEYS = ("timings", "seconds")


def format_float(v: float) -> str:
    return format(float(v), ".17g")


def _render(obj: Any, out: list[str], indent: int) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for i, (k, v) in enumerate(items):
            out.append(f'{pad}  "{k}": ')
            _render(v, out, indent + 1)
            out.append(",\n" if i + 1 < len(items) else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[")
        for i, v in enumerate(obj):
            _render(v, out, indent + 1)
            if i + 1 < len(obj):
                out.append(", ")
        out.append("]")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif obj is None:
        out.append("null")
    else:
        import json

        out.append(json.dumps(str(obj)))


def stable_json(obj: Any) -> str:
    """Deterministic JSON text with .17g floats and insertion-ordered keys."""
    out: list[str] = []
    _render(obj, out, 0)
    out.append("\n")
    return "".join(out)


def scan_row_text(row: dict) -> str:
    cells = []
    for col in SCAN_COLUMNS:
        v = row[col]
        cells.append(format_float(v) if isinstance(v, float) else str(v))
    return ",".join(cells)


def write_scan_rows(fh: IO[str], rows: list[dict]) -> None:
    fh.write(SCAN_HEADER + "\n")
    for row in rows:
        fh.write(scan_row_text(row) + "\n")
        fh.flush()


def strip_seconds_column(csv_text: str) -> str:
    """Drop the 'seconds' column from scan CSV text for byte comparisons."""
    lines = csv_text.splitlines()
    if not lines:
        return csv_text
    header = lines[0].split(",")
    keep = [i for i, c in enumerate(header) if c != "seconds"]
    out = []
    for line in lines:
        cells = line.split(",")
        out.append(",".join(cells[i] for i in keep))
    return "\n".join(out) + "\n"

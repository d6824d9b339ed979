"""Parsing and validation of heckesum scan CSVs."""

from __future__ import annotations

import csv
from dataclasses import dataclass

#: The frozen scan schema this package understands (interface contract
#: with the heckesum CLI).
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


class SchemaError(ValueError):
    """The input file does not carry the expected scan schema."""


@dataclass
class ScanFrame:
    """Rows of one scan CSV, with float columns parsed."""

    rows: list[dict]

    @classmethod
    def read(cls, path: str) -> "ScanFrame":
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise SchemaError(f"{path}: empty file, expected scan header")
            if tuple(header) != SCAN_COLUMNS:
                raise SchemaError(
                    f"{path}: unknown schema {header!r}; expected {list(SCAN_COLUMNS)}"
                )
            rows = []
            for lineno, cells in enumerate(reader, start=2):
                if not cells or cells == [""]:
                    continue
                if len(cells) != len(SCAN_COLUMNS):
                    raise SchemaError(f"{path}:{lineno}: expected {len(SCAN_COLUMNS)} cells")
                row = {}
                for name, cell in zip(SCAN_COLUMNS, cells):
                    row[name] = int(cell) if name == "terms" else float(cell)
                rows.append(row)
        return cls(rows=rows)

    def column(self, name: str) -> list:
        if name not in SCAN_COLUMNS:
            raise SchemaError(f"unknown column {name!r}")
        return [row[name] for row in self.rows]

    def __len__(self) -> int:
        return len(self.rows)

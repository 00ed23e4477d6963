"""Report serialization with fixed columns and deterministic float formatting."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

__all__ = ["COLUMNS", "ValidationReport", "format_float", "parse_float", "read_report"]

COLUMNS = ("check", "name", "lhs", "rhs", "ratio", "bound", "pass", "notes")
FLOAT_COLUMNS = ("lhs", "rhs", "ratio", "bound")


def format_float(x: float) -> str:
    """Shortest round-trip decimal; ``nan``, ``inf`` and ``-inf`` spelled out."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def parse_float(text) -> float:
    return float(text)


def _json_number(x: float):
    x = float(x)
    return x if math.isfinite(x) else format_float(x)


@dataclass(frozen=True)
class ValidationReport:
    """Ordered rows with the fixed columns of :data:`COLUMNS`."""

    rows: tuple

    @classmethod
    def from_records(cls, records) -> "ValidationReport":
        rows = tuple(
            {"check": r.check, "name": r.name, "lhs": float(r.lhs), "rhs": float(r.rhs),
             "ratio": float(r.ratio), "bound": float(r.bound), "pass": bool(r.passed),
             "notes": r.notes}
            for r in records
        )
        return cls(rows)

    @property
    def passed(self) -> bool:
        return all(row["pass"] for row in self.rows)

    @property
    def failures(self) -> list:
        return [row for row in self.rows if not row["pass"]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for row in self.rows:
            w.writerow([format_float(row[c]) if c in FLOAT_COLUMNS
                        else ("true" if row[c] else "false") if c == "pass"
                        else row[c] for c in COLUMNS])
        return buf.getvalue()

    def to_json(self) -> str:
        out = [{c: (_json_number(row[c]) if c in FLOAT_COLUMNS else row[c]) for c in COLUMNS}
               for row in self.rows]
        return json.dumps({"columns": list(COLUMNS), "records": out}, indent=2) + "\n"

    def dumps(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")


def _row_from_strings(raw: dict) -> dict:
    row = {}
    for c in COLUMNS:
        if c not in raw:
            raise ValueError(f"report row lacks column {c!r}")
        v = raw[c]
        if c in FLOAT_COLUMNS:
            row[c] = parse_float(v)
        elif c == "pass":
            if isinstance(v, bool):
                row[c] = v
            elif v in ("true", "false"):
                row[c] = v == "true"
            else:
                raise ValueError(f"bad pass value {v!r}")
        else:
            row[c] = str(v)
    return row


def read_report(text: str) -> ValidationReport:
    """Parse a CSV or JSON report produced by :meth:`ValidationReport.dumps`."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        raws = data.get("records", [])
    else:
        reader = csv.DictReader(io.StringIO(text))
        if tuple(reader.fieldnames or ()) != COLUMNS:
            raise ValueError(f"CSV header must be {','.join(COLUMNS)}")
        raws = list(reader)
    return ValidationReport(tuple(_row_from_strings(r) for r in raws))

"""Delimited tables and JSON reports with exact numeric round-trip.

Floats are written with 17 significant digits, which is enough for
float64 -> text -> float64 to be the identity.  Integer-valued floats keep
a trailing ".0" so the reader can tell them apart from true integers.
"""

from __future__ import annotations

import csv
import json

from .errors import InputError

__all__ = [
    "format_float",
    "write_csv",
    "read_csv",
    "write_json_report",
    "read_json_report",
]


def format_float(x: float) -> str:
    s = f"{float(x):.17g}"
    if s.lstrip("+-").isdigit():
        s += ".0"
    return s


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format_float(v)
    if isinstance(v, str):
        return v
    raise InputError(f"unsupported cell type: {type(v).__name__}")


def write_csv(path, header, rows) -> None:
    """Comma-separated, one header row, LF line endings."""
    header = [str(h) for h in header]
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            row = list(row)
            if len(row) != len(header):
                raise InputError(
                    f"row width {len(row)} does not match header width {len(header)}"
                )
            w.writerow([_cell(v) for v in row])


def _parse(cell: str):
    try:
        return int(cell)
    except ValueError:
        pass
    try:
        return float(cell)
    except ValueError:
        pass
    if cell == "true":
        return True
    if cell == "false":
        return False
    return cell


def read_csv(path):
    """Inverse of write_csv: (header, rows) with cells parsed back."""
    with open(path, "r", encoding="utf-8", newline="") as f:
        r = csv.reader(f)
        try:
            header = next(r)
        except StopIteration:
            raise InputError(f"{path}: empty table") from None
        rows = [[_parse(c) for c in row] for row in r]
    return header, rows


def write_json_report(path, report) -> None:
    """UTF-8 JSON with 2-space indent and a trailing newline."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        json.dump(report, f, indent=2, ensure_ascii=False)
        f.write("\n")


def read_json_report(path):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)

"""Locale-independent CSV tables with fixed significant-digit formatting."""

from __future__ import annotations

import csv
import io
import sys
from dataclasses import dataclass, field
from pathlib import Path


def format_number(value, precision: int = 9) -> str:
    """Shortest decimal with at most ``precision`` significant digits (``'g'`` style)."""
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    return format(float(value), f".{precision}g")


@dataclass
class CsvTable:
    header: list[str]
    rows: list[list] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)
    precision: int = 9

    def add(self, *values) -> None:
        if len(values) != len(self.header):
            raise ValueError(f"row has {len(values)} fields, header has {len(self.header)}")
        self.rows.append(list(values))

    def render(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        for row in self.rows:
            w.writerow([v if isinstance(v, str) else format_number(v, self.precision) for v in row])
        for c in self.comments:
            buf.write(f"# {c}\n")
        return buf.getvalue()

    def write(self, path=None) -> None:
        text = self.render()
        if path is None or str(path) == "-":
            sys.stdout.write(text)
        else:
            Path(path).write_text(text, encoding="utf-8", newline="\n")


def read_csv(text: str) -> tuple[list[str], list[list[float]], list[str]]:
    """Parse a table written by :class:`CsvTable`; returns header, numeric rows, comments."""
    comments = [ln[1:].strip() for ln in text.splitlines() if ln.startswith("#")]
    body = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    reader = csv.reader(body)
    header = next(reader)
    rows = [[float(v) for v in row] for row in reader]
    return header, rows, comments

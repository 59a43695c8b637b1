"""CSV loading with an explicit column map.

Numbers must use a dot decimal separator.  Any empty or unparseable cell is
an error: rows are never dropped silently.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyFile, MissingColumn, ParseError
from .model import Sample, validate_sample

_NUMBER = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")


@dataclass(frozen=True)
class ColumnMap:
    y: str
    w: tuple[str, ...]
    x: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(self.w))
        object.__setattr__(self, "x", tuple(self.x))
        if not self.w or not self.x:
            raise ValueError("w and x need at least one column each")
        if self.y in self.w or self.y in self.x:
            raise ValueError(f"response column {self.y!r} also used as a regressor")

    def swapped(self) -> ColumnMap:
        return ColumnMap(self.y, self.x, self.w)

    def columns(self) -> list[str]:
        return list(dict.fromkeys((self.y, *self.w, *self.x)))


def parse_number(text: str, row: int, col: str) -> float:
    s = text.strip()
    if not _NUMBER.fullmatch(s):
        raise ParseError(row, col, text)
    return float(s)


def read_columns(path, names) -> dict[str, np.ndarray]:
    """Read the named numeric columns; ``row`` numbers in errors count data rows from 1."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or not any(h.strip() for h in header):
            raise EmptyFile(f"{path}: no header row")
        header = [h.strip() for h in header]
        missing = [c for c in names if c not in header]
        if missing:
            raise MissingColumn(f"{path}: column(s) not in header: {', '.join(missing)}")
        idx = {c: header.index(c) for c in names}
        values: dict[str, list[float]] = {c: [] for c in names}
        for rownum, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(rownum, "<row>", ",".join(row))
            for c, j in idx.items():
                values[c].append(parse_number(row[j], rownum, c))
    if not values[names[0]]:
        raise EmptyFile(f"{path}: header but no data rows")
    return {c: np.array(v, dtype=np.float64) for c, v in values.items()}


def load_csv(path, cmap: ColumnMap) -> Sample:
    cols = read_columns(path, cmap.columns())
    return validate_sample(
        cols[cmap.y],
        np.column_stack([cols[c] for c in cmap.w]),
        np.column_stack([cols[c] for c in cmap.x]),
    )


def write_csv(path, sample: Sample, cmap: ColumnMap) -> None:
    """Write a sample back out; shared column names are written once."""
    data = {cmap.y: sample.y}
    for j, c in enumerate(cmap.w):
        data[c] = sample.w[:, j]
    for j, c in enumerate(cmap.x):
        data.setdefault(c, sample.x[:, j])
    names = list(data)
    with open(Path(path), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for i in range(sample.n):
            writer.writerow([repr(float(data[c][i])) for c in names])

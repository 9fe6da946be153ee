"""CSV reading, column selection, value coercion, and folder merge."""

from __future__ import annotations

import csv
import logging
import math
from pathlib import Path

import numpy as np

from .errors import EmptyFile, IoError, NoSuchColumn, RaggedRows
from .model import RawTable
from .timestamps import FormatOrder, Instant, NoOrderParsesAnything, parse_column, render_instant

logger = logging.getLogger(__name__)

_NA_TOKENS = frozenset({"", "na", "nan"})


def read_csv(path: str | Path) -> RawTable:
    """Read an RFC-4180 CSV with a header row; every cell stays a string.

    Raises
    ------
    IoError, EmptyFile, RaggedRows
    """
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8-sig") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise EmptyFile(f"{path} has no header row")
    header = rows[0]
    width = len(header)
    columns: list[list[str]] = [[] for _ in header]
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise RaggedRows(
                f"{path}:{lineno} has {len(row)} fields, header has {width}"
            )
        for j, cell in enumerate(row):
            columns[j].append(cell)
    return RawTable(column_names=header, columns=columns)


def select_columns(
    table: RawTable, time: str | None = None, value: str | None = None
) -> tuple[list[str], list[str]]:
    """Pick the time and value columns (defaults: first and second).

    Raises
    ------
    NoSuchColumn
    """
    def locate(name: str | None, default: int) -> int:
        if name is None:
            return default
        try:
            return table.column_names.index(name)
        except ValueError:
            raise NoSuchColumn(
                f"no column {name!r}; have {table.column_names}"
            ) from None

    ti = locate(time, 0)
    vi = locate(value, 1)
    return table.columns[ti], table.columns[vi]


def coerce_values(texts: list[str]) -> tuple[np.ndarray, list[int]]:
    """Parse observation strings to floats; everything unparseable becomes NaN.

    Empty cells and NA/NaN tokens (case-insensitive) are ordinary missing
    values.  Genuinely unparseable non-empty tokens also become NaN but are
    additionally reported in ``failed_indices``.  Total function, never raises.
    """
    values = np.full(len(texts), np.nan)
    failed: list[int] = []
    for i, text in enumerate(texts):
        token = text.strip()
        if token.lower() in _NA_TOKENS:
            continue
        try:
            parsed = float(token)
        except ValueError:
            failed.append(i)
            continue
        if not math.isfinite(parsed):
            failed.append(i)
            continue
        values[i] = parsed
    return values, failed


def merge_csv(folder: str | Path, formats: list[FormatOrder]) -> RawTable:
    """Full outer join of every CSV in a folder on its first (timestamp) column.

    Each file's timestamp column is parsed by whichever of ``formats`` fits
    most rows.  The merged table is sorted ascending, its first column is
    ``time`` (ISO-8601 UTC), and the other columns are named
    ``<filestem>.<original name>``; cells missing on one side stay empty.

    Raises
    ------
    IoError, NoOrderParsesAnything (with the file name attached)
    """
    folder = Path(folder)
    try:
        files = sorted(p for p in folder.iterdir() if p.suffix.lower() == ".csv")
    except OSError as exc:
        raise IoError(f"cannot list {folder}: {exc}") from exc
    if not files:
        raise IoError(f"no CSV files in {folder}")

    merged: dict[Instant, dict[str, str]] = {}
    out_names: list[str] = []
    for path in files:
        table = read_csv(path)
        try:
            instants, _, failures = parse_column(table.columns[0], formats)
        except NoOrderParsesAnything as exc:
            raise NoOrderParsesAnything(f"{path.name}: {exc}") from exc
        if failures:
            logger.warning("%s: %d unparseable timestamps skipped",
                           path.name, len(failures))
        col_names = [f"{path.stem}.{name}" for name in table.column_names[1:]]
        out_names.extend(col_names)
        seen: set[Instant] = set()
        for r, instant in enumerate(instants):
            if instant is None:
                continue
            if instant in seen:
                logger.warning("%s: duplicate timestamp %s, keeping first row",
                               path.name, render_instant(instant))
                continue
            seen.add(instant)
            row = merged.setdefault(instant, {})
            for name, col in zip(col_names, table.columns[1:]):
                row[name] = col[r]

    instants_sorted = sorted(merged)
    columns: list[list[str]] = [[render_instant(t) for t in instants_sorted]]
    for name in out_names:
        columns.append([merged[t].get(name, "") for t in instants_sorted])
    return RawTable(column_names=["time"] + out_names, columns=columns)


def write_csv(table: RawTable, path: str | Path) -> None:
    """Write a RawTable back out as UTF-8 CSV with a header row."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(table.column_names)
        for r in range(table.row_count):
            writer.writerow([col[r] for col in table.columns])

"""Data model for raw, regularized, and cleaned series, plus the change log.

Values are 64-bit floats throughout; an absent observation is ``NaN``.
Cleaned observations are stored column-wise (one array per attribute) and
exposed row-wise as :class:`AnnotatedPoint` where convenient.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Iterator, Optional

import numpy as np

from .errors import IrreversibleChange, UnknownChangeId
from .timestamps import Instant, parse_iso_instant, render_instant

MISSING_NONE = "none"
MISSING_MCAR = "mcar"
MISSING_MAR = "mar"

# Change kinds that rewrite the timeline itself; these cannot be reverted.
STRUCTURAL_KINDS = frozenset({
    "inserted_timestamp",
    "deduplicated",
    "conflicting_duplicate_nulled",
    "value_coercion_failed",
    "timestamp_parse_failed",
})
REVERSIBLE_KINDS = frozenset({"imputed_missing", "outlier_replaced"})
CHANGE_KINDS = STRUCTURAL_KINDS | REVERSIBLE_KINDS


@dataclass(frozen=True)
class RawTable:
    """String-typed table straight out of a CSV: header plus columns."""

    column_names: list[str]
    columns: list[list[str]]

    def __post_init__(self) -> None:
        if len(self.column_names) != len(self.columns):
            raise ValueError("column_names and columns disagree")
        if len(self.columns) < 2:
            raise ValueError("need at least 2 columns (time and value)")
        lengths = {len(c) for c in self.columns}
        if len(lengths) > 1:
            raise ValueError("columns have unequal row counts")

    @property
    def row_count(self) -> int:
        return len(self.columns[0])


@dataclass(frozen=True)
class RawSeries:
    """(instant, value) points before any ordering or uniqueness repair."""

    times: np.ndarray    # int64 seconds
    values: np.ndarray   # float64, NaN = absent

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class TimeSeries:
    """Regular series: implied timestamps are start + k * interval."""

    start: Instant
    interval: int
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.interval <= 0:
            raise ValueError("interval must be positive")
        if len(self.values) < 2:
            raise ValueError("series must have at least 2 points")

    def __len__(self) -> int:
        return len(self.values)

    def instants(self) -> np.ndarray:
        return self.start + self.interval * np.arange(len(self.values), dtype=np.int64)


@dataclass(frozen=True)
class AnnotatedPoint:
    time: Instant
    value: float
    missing_type: str = MISSING_NONE
    method_used: Optional[str] = None
    is_outlier: bool = False
    orig_value: Optional[float] = None


@dataclass(frozen=True)
class OutlierRecord:
    time: Instant
    value: float
    orig_value: float
    method_used: str


@dataclass(frozen=True)
class ChangeEntry:
    id: int
    kind: str
    time: Optional[Instant] = None
    before: Optional[float] = None
    after: Optional[float] = None


class CleanData:
    """Column-wise store of annotated points on a regular timeline."""

    def __init__(
        self,
        times: np.ndarray,
        values: np.ndarray,
        missing_type: Optional[list[str]] = None,
        method_used: Optional[list[Optional[str]]] = None,
        is_outlier: Optional[np.ndarray] = None,
        orig_value: Optional[np.ndarray] = None,
    ):
        n = len(times)
        self.times = np.asarray(times, dtype=np.int64)
        self.values = np.asarray(values, dtype=np.float64)
        self.missing_type = list(missing_type) if missing_type is not None else [MISSING_NONE] * n
        self.method_used = list(method_used) if method_used is not None else [None] * n
        self.is_outlier = (
            np.asarray(is_outlier, dtype=bool) if is_outlier is not None
            else np.zeros(n, dtype=bool)
        )
        self.orig_value = (
            np.asarray(orig_value, dtype=np.float64) if orig_value is not None
            else np.full(n, np.nan)
        )
        if not (len(self.values) == len(self.missing_type) == len(self.method_used)
                == len(self.is_outlier) == len(self.orig_value) == n):
            raise ValueError("column lengths disagree")

    def __len__(self) -> int:
        return len(self.times)

    def point(self, i: int) -> AnnotatedPoint:
        value = self.values[i]
        orig = self.orig_value[i]
        return AnnotatedPoint(
            time=int(self.times[i]),
            value=float(value),
            missing_type=self.missing_type[i],
            method_used=self.method_used[i],
            is_outlier=bool(self.is_outlier[i]),
            orig_value=None if math.isnan(orig) else float(orig),
        )

    def __iter__(self) -> Iterator[AnnotatedPoint]:
        return (self.point(i) for i in range(len(self)))

    def copy(self) -> "CleanData":
        return CleanData(
            self.times.copy(),
            self.values.copy(),
            list(self.missing_type),
            list(self.method_used),
            self.is_outlier.copy(),
            self.orig_value.copy(),
        )

    def index_of(self, instant: Instant) -> int:
        i = int(np.searchsorted(self.times, instant))
        if i >= len(self) or self.times[i] != instant:
            raise KeyError(f"no point at {render_instant(instant)}")
        return i


ErrorRow = dict[str, float]


@dataclass(frozen=True)
class CleanResult:
    """Everything the cleaner produced, including the audit trail."""

    clean_data: CleanData
    missing_ts: list[Instant] = field(default_factory=list)
    duplicate_ts: list[Instant] = field(default_factory=list)
    imp_methods: list[str] = field(default_factory=list)
    mcar_err: Optional[ErrorRow] = None
    mar_err: Optional[ErrorRow] = None
    outliers: list[OutlierRecord] = field(default_factory=list)
    outlier_mcar_err: Optional[ErrorRow] = None
    outlier_mar_err: Optional[ErrorRow] = None
    change_log: list[ChangeEntry] = field(default_factory=list)


def classify_missing_runs(values: np.ndarray) -> list[tuple[int, int, str]]:
    """Maximal NaN runs as (start, length, mechanism); singletons are MCAR."""
    runs: list[tuple[int, int, str]] = []
    gap = np.isnan(values)
    i = 0
    n = len(values)
    while i < n:
        if gap[i]:
            j = i
            while j < n and gap[j]:
                j += 1
            runs.append((i, j - i, MISSING_MCAR if j - i == 1 else MISSING_MAR))
            i = j
        else:
            i += 1
    return runs


def revert(result: CleanResult, change_ids: set[int]) -> CleanResult:
    """Undo selected imputations / outlier replacements.

    Reverted points get their pre-change value back (absent for imputations,
    the original observation for replacements); their ``method_used`` is
    cleared and reverted entries leave the change log.  Points that become
    absent again are re-flagged mcar/mar by run length.  Structural timeline
    changes cannot be reverted.

    Raises
    ------
    UnknownChangeId, IrreversibleChange
    """
    if not change_ids:
        return result
    by_id = {e.id: e for e in result.change_log}
    for cid in sorted(change_ids):
        if cid not in by_id:
            raise UnknownChangeId(f"no change with id {cid}")
        if by_id[cid].kind not in REVERSIBLE_KINDS:
            raise IrreversibleChange(
                f"change {cid} ({by_id[cid].kind}) cannot be reverted"
            )
    data = result.clean_data.copy()
    for cid in sorted(change_ids):
        entry = by_id[cid]
        i = data.index_of(entry.time)
        if entry.kind == "imputed_missing":
            data.values[i] = np.nan
            data.method_used[i] = None
        else:  # outlier_replaced
            data.values[i] = entry.before
            data.method_used[i] = None
    # Re-flag gap mechanisms over the post-revert value column.
    for start, length, mech in classify_missing_runs(data.values):
        for k in range(start, start + length):
            data.missing_type[k] = mech
    new_log = [e for e in result.change_log if e.id not in change_ids]
    return replace(result, clean_data=data, change_log=new_log)


# --- JSON serialization -----------------------------------------------------
#
# One document, keys exactly: clean_data, missing_ts, duplicate_ts,
# imp_methods, mcar_err, mar_err, outliers, outlier_mcar_err,
# outlier_mar_err, change_log.  Instants render ISO-8601 UTC, absent
# values render as null.

def _opt(x: Optional[float]) -> Optional[float]:
    if x is None:
        return None
    x = float(x)
    return None if math.isnan(x) else x


def result_to_dict(result: CleanResult) -> dict:
    data = result.clean_data
    points = []
    for i in range(len(data)):
        mt = data.missing_type[i]
        points.append({
            "time": render_instant(int(data.times[i])),
            "value": _opt(data.values[i]),
            "missing_type": None if mt == MISSING_NONE else mt,
            "method_used": data.method_used[i],
            "is_outlier": bool(data.is_outlier[i]),
            "orig_value": _opt(data.orig_value[i]),
        })
    return {
        "clean_data": points,
        "missing_ts": [render_instant(t) for t in result.missing_ts],
        "duplicate_ts": [render_instant(t) for t in result.duplicate_ts],
        "imp_methods": list(result.imp_methods),
        "mcar_err": result.mcar_err,
        "mar_err": result.mar_err,
        "outliers": [
            {
                "time": render_instant(o.time),
                "value": o.value,
                "orig_value": o.orig_value,
                "method_used": o.method_used,
            }
            for o in result.outliers
        ],
        "outlier_mcar_err": result.outlier_mcar_err,
        "outlier_mar_err": result.outlier_mar_err,
        "change_log": [
            {
                "id": e.id,
                "kind": e.kind,
                "time": None if e.time is None else render_instant(e.time),
                "before": _opt(e.before),
                "after": _opt(e.after),
            }
            for e in result.change_log
        ],
    }


def result_to_json(result: CleanResult, indent: Optional[int] = None) -> str:
    return json.dumps(result_to_dict(result), indent=indent, allow_nan=False)


def result_from_dict(doc: dict) -> CleanResult:
    points = doc["clean_data"]
    n = len(points)
    times = np.empty(n, dtype=np.int64)
    values = np.full(n, np.nan)
    missing_type = [MISSING_NONE] * n
    method_used: list[Optional[str]] = [None] * n
    is_outlier = np.zeros(n, dtype=bool)
    orig_value = np.full(n, np.nan)
    for i, p in enumerate(points):
        times[i] = parse_iso_instant(p["time"])
        if p["value"] is not None:
            values[i] = p["value"]
        if p["missing_type"] is not None:
            missing_type[i] = p["missing_type"]
        method_used[i] = p["method_used"]
        is_outlier[i] = p["is_outlier"]
        if p["orig_value"] is not None:
            orig_value[i] = p["orig_value"]
    return CleanResult(
        clean_data=CleanData(times, values, missing_type, method_used,
                             is_outlier, orig_value),
        missing_ts=[parse_iso_instant(t) for t in doc["missing_ts"]],
        duplicate_ts=[parse_iso_instant(t) for t in doc["duplicate_ts"]],
        imp_methods=list(doc["imp_methods"]),
        mcar_err=doc["mcar_err"],
        mar_err=doc["mar_err"],
        outliers=[
            OutlierRecord(
                time=parse_iso_instant(o["time"]),
                value=o["value"],
                orig_value=o["orig_value"],
                method_used=o["method_used"],
            )
            for o in doc["outliers"]
        ],
        outlier_mcar_err=doc["outlier_mcar_err"],
        outlier_mar_err=doc["outlier_mar_err"],
        change_log=[
            ChangeEntry(
                id=e["id"],
                kind=e["kind"],
                time=None if e["time"] is None else parse_iso_instant(e["time"]),
                before=e["before"],
                after=e["after"],
            )
            for e in doc["change_log"]
        ],
    )


def result_from_json(text: str) -> CleanResult:
    return result_from_dict(json.loads(text))

"""Timeline repair: interval inference, missing-timestamp insertion,
duplicate resolution, and the composed regularization step."""

from __future__ import annotations

from collections import Counter

import numpy as np

from .errors import NoPositiveDifference, OffGridTimestamp, TooFewPoints
from .model import RawSeries, TimeSeries
from .timestamps import Instant, render_instant


def infer_interval(instants: np.ndarray) -> int:
    """Mode of consecutive positive differences of the sorted, deduplicated
    instants; ties break toward the smallest difference.

    Raises
    ------
    TooFewPoints, NoPositiveDifference
    """
    unique = np.unique(np.asarray(instants, dtype=np.int64))
    if len(unique) < 2:
        raise TooFewPoints("need at least 2 distinct instants")
    diffs = np.diff(unique)
    diffs = diffs[diffs > 0]
    if len(diffs) == 0:
        raise NoPositiveDifference("no positive gap between instants")
    counts = Counter(diffs.tolist())
    best_count = max(counts.values())
    return min(d for d, c in counts.items() if c == best_count)


def find_missing_timestamps(instants: np.ndarray, interval: int) -> list[Instant]:
    """Grid instants between min and max that are absent from the input.

    The input must be sorted and unique, and every instant must sit on
    ``min + k * interval``.

    Raises
    ------
    OffGridTimestamp
    """
    instants = np.asarray(instants, dtype=np.int64)
    start = int(instants[0])
    offsets = instants - start
    off_grid = offsets % interval != 0
    if off_grid.any():
        bad = int(instants[np.argmax(off_grid)])
        raise OffGridTimestamp(
            f"{render_instant(bad)} is not on a {interval}s grid from "
            f"{render_instant(start)}"
        )
    present = np.zeros(int(offsets[-1]) // interval + 1, dtype=bool)
    present[offsets // interval] = True
    return [start + interval * int(k) for k in np.flatnonzero(~present)]


def resolve_duplicates(
    times: np.ndarray, values: np.ndarray
) -> tuple[np.ndarray, np.ndarray, list[Instant], list[Instant]]:
    """Sort by instant and collapse repeated instants.

    When every copy of an instant carries the bit-identical value, one copy
    survives.  When copies disagree there is no way to pick the right one,
    so the surviving value is absent.  Either way the instant lands in
    ``duplicate_ts``; disagreements additionally land in ``conflicts``.
    Equality is on the bit pattern of the parsed float, with any two NaNs
    counting as the same (both absent).
    """
    times = np.asarray(times, dtype=np.int64)
    values = np.ascontiguousarray(values, dtype=np.float64)
    order = np.argsort(times, kind="stable")
    times = times[order]
    values = values[order]
    n = len(times)
    if n == 0:
        return times, values, [], []
    starts = np.flatnonzero(np.concatenate(([True], np.diff(times) > 0)))
    ends = np.concatenate((starts[1:], [n]))
    out_t = times[starts]
    out_v = values[starts].copy()
    duplicate_ts: list[Instant] = []
    conflicts: list[Instant] = []
    bits = values.view(np.uint64)
    for g in np.flatnonzero(ends - starts > 1):
        lo, hi = starts[g], ends[g]
        instant = int(times[lo])
        duplicate_ts.append(instant)
        absent = np.isnan(values[lo:hi])
        if absent.all():
            continue
        if absent.any() or not (bits[lo:hi] == bits[lo]).all():
            out_v[g] = np.nan
            conflicts.append(instant)
    return out_t, out_v, duplicate_ts, conflicts


def regularize(
    raw: RawSeries,
) -> tuple[TimeSeries, list[Instant], list[Instant], list[Instant]]:
    """Sort, deduplicate, and gap-fill a raw series onto its regular grid.

    Inserted grid points carry absent values.  Returns the series plus the
    missing-timestamp, duplicate-timestamp, and conflicting-duplicate lists.

    Raises
    ------
    TooFewPoints, OffGridTimestamp
    """
    if len(raw) < 2:
        raise TooFewPoints("need at least 2 points to regularize")
    times, values, duplicate_ts, conflicts = resolve_duplicates(raw.times, raw.values)
    interval = infer_interval(times)
    missing_ts = find_missing_timestamps(times, interval)
    start = int(times[0])
    length = (int(times[-1]) - start) // interval + 1
    grid_values = np.full(length, np.nan)
    grid_values[(times - start) // interval] = values
    series = TimeSeries(start=start, interval=interval, values=grid_values)
    return series, missing_ts, duplicate_ts, conflicts

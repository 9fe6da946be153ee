"""Micro-scale windows: split a cleaned series by count or calendar span,
summarize each window, and emit one SVG frame per window plus an index."""

from __future__ import annotations

import calendar as _calendar
import json
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import numpy as np

from .concurrency import ordered_map
from .errors import BadSpec, IoError
from .model import CleanResult
from .pipeline import summary_stats
from .timestamps import Instant, render_instant

_SPAN_UNITS = ("second", "minute", "hour", "day", "week", "month", "year")
_FIXED_SECONDS = {"second": 1, "minute": 60, "hour": 3600, "day": 86400,
                  "week": 7 * 86400}
_SPAN_RE = re.compile(r"^\s*(\d+)\s+([a-zA-Z]+?)s?\s*$")


@dataclass(frozen=True)
class IntervalSpec:
    """Either a point count or a calendar span; exactly one is set."""

    count: Optional[int] = None
    quantity: Optional[int] = None
    unit: Optional[str] = None

    def __post_init__(self) -> None:
        if (self.count is None) == (self.quantity is None):
            raise BadSpec("set either a count or a span, not both")
        if self.count is not None and self.count < 1:
            raise BadSpec("count must be positive")
        if self.quantity is not None:
            if self.quantity < 1:
                raise BadSpec("span quantity must be positive")
            if self.unit not in _SPAN_UNITS:
                raise BadSpec(f"unknown span unit {self.unit!r}")


def parse_interval_spec(text: str | int) -> IntervalSpec:
    """``"500"`` -> count; ``"1 month"`` / ``"14 days"`` -> span."""
    if isinstance(text, int):
        return IntervalSpec(count=text)
    text = text.strip()
    if re.fullmatch(r"\d+", text):
        return IntervalSpec(count=int(text))
    m = _SPAN_RE.match(text)
    if not m:
        raise BadSpec(f"cannot parse interval {text!r}")
    return IntervalSpec(quantity=int(m.group(1)), unit=m.group(2).lower())


@dataclass(frozen=True)
class WindowSummary:
    stats: tuple[float, float, float, float, float, float]
    n_missing_imputed: int
    n_outliers: int
    n_missing_ts: int
    n_duplicate_ts: int

    def to_dict(self) -> dict:
        keys = ("min", "q1", "median", "mean", "q3", "max")
        return {
            "stats": {k: v for k, v in zip(keys, self.stats)},
            "n_missing_imputed": self.n_missing_imputed,
            "n_outliers": self.n_outliers,
            "n_missing_ts": self.n_missing_ts,
            "n_duplicate_ts": self.n_duplicate_ts,
        }


@dataclass(frozen=True)
class Window:
    index: int
    start: int           # slice into clean_data
    stop: int
    time_start: Instant  # first point's instant
    time_end: Instant    # last point's instant
    summary: WindowSummary


def _add_months(instant: Instant, months: int) -> Instant:
    dt = datetime.fromtimestamp(instant, tz=timezone.utc)
    total = dt.year * 12 + (dt.month - 1) + months
    year, month = divmod(total, 12)
    month += 1
    day = min(dt.day, _calendar.monthrange(year, month)[1])
    moved = dt.replace(year=year, month=month, day=day)
    return int(moved.timestamp())


def _span_boundaries(anchor: Instant, last: Instant, spec: IntervalSpec) -> list[Instant]:
    """Ascending boundary instants anchor = b0 < b1 < ... with b_last > last."""
    bounds = [anchor]
    k = 1
    while bounds[-1] <= last:
        if spec.unit in _FIXED_SECONDS:
            nxt = anchor + k * spec.quantity * _FIXED_SECONDS[spec.unit]
        elif spec.unit == "month":
            nxt = _add_months(anchor, k * spec.quantity)
        else:  # year
            nxt = _add_months(anchor, 12 * k * spec.quantity)
        bounds.append(nxt)
        k += 1
    return bounds


def split_windows(result: CleanResult, spec: IntervalSpec) -> list[Window]:
    """Partition the cleaned series into consecutive windows.

    Count windows are fixed-size chunks (last one may be shorter).  Span
    windows are anchored at the first timestamp: boundaries fall at
    anchor + k*span, with month/year spans advanced by calendar arithmetic
    (day-of-month clamped).
    """
    data = result.clean_data
    n = len(data)
    if n == 0:
        raise BadSpec("empty series")
    if spec.count is not None:
        edges = list(range(0, n, spec.count)) + [n]
    else:
        bounds = _span_boundaries(int(data.times[0]), int(data.times[-1]), spec)
        idx = np.searchsorted(data.times, bounds, side="left")
        edges = sorted(set(int(i) for i in idx if 0 <= i <= n))
        if edges[0] != 0:
            edges.insert(0, 0)
        if edges[-1] != n:
            edges.append(n)
    missing_ts = np.sort(np.array(result.missing_ts, dtype=np.int64))
    duplicate_ts = np.sort(np.array(result.duplicate_ts, dtype=np.int64))
    windows = []
    for k, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        values = data.values[lo:hi]
        finite = values[~np.isnan(values)]
        stats = summary_stats(finite) if len(finite) else (float("nan"),) * 6
        t0, t1 = int(data.times[lo]), int(data.times[hi - 1])
        summary = WindowSummary(
            stats=stats,
            n_missing_imputed=sum(
                1 for i in range(lo, hi) if data.missing_type[i] != "none"
            ),
            n_outliers=int(data.is_outlier[lo:hi].sum()),
            n_missing_ts=int(np.searchsorted(missing_ts, t1, side="right")
                             - np.searchsorted(missing_ts, t0, side="left")),
            n_duplicate_ts=int(np.searchsorted(duplicate_ts, t1, side="right")
                               - np.searchsorted(duplicate_ts, t0, side="left")),
        )
        windows.append(Window(index=k, start=lo, stop=hi,
                              time_start=t0, time_end=t1, summary=summary))
    return windows


# --- SVG frame rendering ----------------------------------------------------

_W, _H = 900, 380
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 20, 84, 30


def _scale(values: np.ndarray, lo: float, hi: float, out_lo: float, out_hi: float):
    span = hi - lo
    if span == 0:
        span = 1.0
        lo -= 0.5
    return out_lo + (values - lo) / span * (out_hi - out_lo)


def _render_svg(result: CleanResult, window: Window, total: int) -> str:
    data = result.clean_data
    lo, hi = window.start, window.stop
    times = data.times[lo:hi].astype(np.float64)
    values = data.values[lo:hi]
    finite = ~np.isnan(values)
    vmin = float(np.nanmin(values)) if finite.any() else 0.0
    vmax = float(np.nanmax(values)) if finite.any() else 1.0
    pad = (vmax - vmin) * 0.05 or 1.0
    vmin, vmax = vmin - pad, vmax + pad
    xs = _scale(times, float(times[0]), float(times[-1]),
                _MARGIN_L, _W - _MARGIN_R)
    ys = _scale(values, vmin, vmax, _H - _MARGIN_B, _MARGIN_T)

    segments: list[str] = []
    run: list[str] = []
    for i in range(len(values)):
        if finite[i]:
            run.append(f"{xs[i]:.2f},{ys[i]:.2f}")
        elif run:
            segments.append(" ".join(run))
            run = []
    if run:
        segments.append(" ".join(run))
    paths = "".join(
        f'<polyline fill="none" stroke="#1f77b4" stroke-width="1" points="{seg}"/>'
        for seg in segments
    )
    marks = []
    for i in range(len(values)):
        if data.missing_type[lo + i] != "none" and finite[i]:
            marks.append(
                f'<circle cx="{xs[i]:.2f}" cy="{ys[i]:.2f}" r="3.5" '
                f'fill="#2ca02c" stroke="none"><title>imputed</title></circle>'
            )
        if data.is_outlier[lo + i] and finite[i]:
            x, y = xs[i], ys[i]
            marks.append(
                f'<path d="M{x - 4:.2f},{y - 4:.2f} L{x + 4:.2f},{y + 4:.2f} '
                f'M{x - 4:.2f},{y + 4:.2f} L{x + 4:.2f},{y - 4:.2f}" '
                f'stroke="#d62728" stroke-width="2"><title>outlier</title></path>'
            )
    s = window.summary
    stats_text = "  ".join(
        f"{k} {v:.6g}" for k, v in zip(
            ("min", "q1", "median", "mean", "q3", "max"), s.stats
        )
    )
    caption = (
        f'<text x="{_MARGIN_L}" y="22" font-family="monospace" font-size="14">'
        f"window {window.index + 1}/{total}  "
        f"{render_instant(window.time_start)} to {render_instant(window.time_end)}"
        f"</text>"
        f'<text x="{_MARGIN_L}" y="44" font-family="monospace" font-size="12">'
        f"{stats_text}</text>"
        f'<text x="{_MARGIN_L}" y="64" font-family="monospace" font-size="12">'
        f"imputed: {s.n_missing_imputed}  outliers: {s.n_outliers}  "
        f"missing_ts: {s.n_missing_ts}  duplicate_ts: {s.n_duplicate_ts}</text>"
    )
    frame_box = (
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" '
        f'width="{_W - _MARGIN_L - _MARGIN_R}" '
        f'height="{_H - _MARGIN_T - _MARGIN_B}" '
        f'fill="none" stroke="#999" stroke-width="1"/>'
        f'<text x="{_MARGIN_L - 6}" y="{_H - _MARGIN_B}" text-anchor="end" '
        f'font-family="monospace" font-size="11">{vmin:.6g}</text>'
        f'<text x="{_MARGIN_L - 6}" y="{_MARGIN_T + 10}" text-anchor="end" '
        f'font-family="monospace" font-size="11">{vmax:.6g}</text>'
    )
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">'
        f'<rect width="{_W}" height="{_H}" fill="white"/>'
        f"{caption}{frame_box}{paths}{''.join(marks)}</svg>\n"
    )


def render_frames(
    result: CleanResult, windows: list[Window], out_dir: str | Path
) -> list[dict]:
    """Write one SVG per window plus ``index.json``; returns the index."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create {out_dir}: {exc}") from exc
    width = max(4, len(str(max(len(windows) - 1, 0))))
    entries = []
    for w in windows:
        name = f"frame_{w.index:0{width}d}.svg"
        summary = w.summary.to_dict()
        summary["stats"] = {
            k: (None if v != v else v) for k, v in summary["stats"].items()
        }
        entries.append({
            "frame": name,
            "window_index": w.index,
            "time_range": {
                "start": render_instant(w.time_start),
                "end": render_instant(w.time_end),
            },
            "summary": summary,
        })

    def write_one(w: Window) -> None:
        svg = _render_svg(result, w, len(windows))
        try:
            (out_dir / entries[w.index]["frame"]).write_text(svg, encoding="utf-8")
        except OSError as exc:
            raise IoError(f"cannot write frame {w.index}: {exc}") from exc

    ordered_map(write_one, windows)
    (out_dir / "index.json").write_text(
        json.dumps(entries, indent=2, allow_nan=False) + "\n", encoding="utf-8"
    )
    return entries

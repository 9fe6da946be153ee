"""Human-readable cleaning report."""

from __future__ import annotations

import math

import numpy as np

from .model import MISSING_MAR, MISSING_MCAR, CleanResult, ErrorRow
from .pipeline import summary_stats
from .timestamps import render_instant

MAX_LISTING_ROWS = 40


def _fmt_pct(count: int, total: int) -> str:
    if total == 0:
        return "0"
    text = f"{100.0 * count / total:.4f}".rstrip("0").rstrip(".")
    return text or "0"


def _fmt_value(x: float) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "NA"
    return f"{x:.6g}"


def _table(headers: list[str], rows: list[list[str]]) -> list[str]:
    widths = [len(h) for h in headers]
    for row in rows:
        for j, cell in enumerate(row):
            widths[j] = max(widths[j], len(cell))
    lines = ["  ".join(h.rjust(widths[j]) for j, h in enumerate(headers))]
    for row in rows:
        lines.append("  ".join(c.rjust(widths[j]) for j, c in enumerate(row)))
    return lines


def _error_table(row: ErrorRow, method_order: list[str]) -> list[str]:
    ids = [m for m in method_order if m in row]
    ids += [m for m in row if m not in ids]
    return _table(ids, [[_fmt_value(row[m]) for m in ids]])


def _capped(rows: list[list[str]]) -> tuple[list[list[str]], int]:
    if len(rows) <= MAX_LISTING_ROWS:
        return rows, 0
    return rows[:MAX_LISTING_ROWS], len(rows) - MAX_LISTING_ROWS


def _instant_listing(instants: list[int]) -> list[str]:
    rows, extra = _capped([[render_instant(t)] for t in instants])
    lines = [" " + r[0] for r in rows]
    if extra:
        lines.append(f" … and {extra} more")
    return lines


def generate_report(result: CleanResult) -> str:
    """Render the fixed-structure text report for a cleaning result.

    Section order and headers are stable so the report can be diffed;
    listings are capped at 40 rows (the JSON serialization always carries
    everything).
    """
    data = result.clean_data
    n = len(data)
    lines: list[str] = []

    lines.append("# Summary of cleaned data:")
    finite = data.values[~np.isnan(data.values)]
    if len(finite):
        stats = summary_stats(finite)
        labels = ["Min.", "1st Qu.", "Median", "Mean", "3rd Qu.", "Max."]
        lines.extend(" " + l for l in _table(labels, [[_fmt_value(v) for v in stats]]))
    else:
        lines.append(" No observed values.")
    lines.append("")

    lines.append(f"# Missing timestamps:  {len(result.missing_ts)}")
    lines.append("")
    if result.missing_ts:
        lines.extend(_instant_listing(result.missing_ts))
    else:
        lines.append("No missing timestamps found.")
    lines.append("")

    lines.append(f"# Duplicate timestamps:  {len(result.duplicate_ts)}")
    lines.append("")
    if result.duplicate_ts:
        lines.extend(_instant_listing(result.duplicate_ts))
    else:
        lines.append("No duplicate timestamps found.")
    lines.append("")

    imputed_idx = [i for i in range(n) if data.missing_type[i] != "none"]
    mcar_idx = [i for i in imputed_idx if data.missing_type[i] == MISSING_MCAR]
    mar_idx = [i for i in imputed_idx if data.missing_type[i] == MISSING_MAR]
    lines.append(
        f"# Missing Values:  {len(imputed_idx)} ({_fmt_pct(len(imputed_idx), n)}%)"
    )
    lines.append("")

    for label, idx, err in (
        ("MCAR", mcar_idx, result.mcar_err),
        ("MAR", mar_idx, result.mar_err),
    ):
        lines.append(f"## {label}:  {len(idx)} ({_fmt_pct(len(idx), n)}%)")
        if not idx:
            lines.append(f"No {label} found.")
            lines.append("")
            continue
        if err:
            lines.append(f" {label} Errors:")
            lines.extend(" " + l for l in _error_table(err, result.imp_methods))
            lines.append("")
        rows, extra = _capped([
            [render_instant(int(data.times[i])), _fmt_value(data.values[i]),
             data.method_used[i] or "NA"]
            for i in idx
        ])
        lines.extend(" " + l for l in _table(["time", "value", "method_used"], rows))
        if extra:
            lines.append(f" … and {extra} more")
        lines.append("")

    lines.append(f"# Outliers:  {len(result.outliers)}")
    lines.append("")
    if result.outliers:
        rows, extra = _capped([
            [render_instant(o.time), _fmt_value(o.value),
             _fmt_value(o.orig_value), o.method_used]
            for o in result.outliers
        ])
        lines.extend(" " + l for l in _table(
            ["time", "value", "orig_value", "method_used"], rows
        ))
        if extra:
            lines.append(f" … and {extra} more")
        lines.append("")

        lines.append("## Imputation errors while replacing outliers:")
        lines.append("### MCAR errors:")
        if result.outlier_mcar_err:
            lines.extend(" " + l for l in _error_table(
                result.outlier_mcar_err, result.imp_methods
            ))
        else:
            lines.append("No MCAR errors found.")
        lines.append("### MAR errors:")
        if result.outlier_mar_err:
            lines.extend(" " + l for l in _error_table(
                result.outlier_mar_err, result.imp_methods
            ))
        else:
            lines.append("No MAR errors found.")
    else:
        lines.append("No outliers found.")
    lines.append("")
    return "\n".join(lines)

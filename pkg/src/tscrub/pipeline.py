"""End-to-end cleaning: column selection, timestamp parsing, value
coercion, timeline repair, benchmark-driven imputation, and outlier
replacement, all folded into one CleanResult with a change log."""

from __future__ import annotations

import logging
from contextlib import contextmanager
from typing import Optional, Sequence

import numpy as np

from . import anomaly as anomaly_mod
from .benchmark import (
    BenchmarkConfig,
    classify_gaps,
    evaluate_methods,
    impute_by_mechanism,
    select_best,
)
from .errors import CleaningError, SegmentTooShort
from .imputation import DEFAULT_METHODS, MethodRegistry, default_registry
from .ingest import coerce_values, select_columns
from .model import (
    MISSING_NONE,
    ChangeEntry,
    CleanData,
    CleanResult,
    ErrorRow,
    RawSeries,
    RawTable,
)
from .timeline import regularize
from .timestamps import parse_column, parse_format_order

logger = logging.getLogger(__name__)

FALLBACK_METHOD = "na_interpolation"


@contextmanager
def _stage(name: str):
    try:
        yield
    except CleaningError as exc:
        raise type(exc)(f"[{name}] {exc}") from exc


def summary_stats(values: np.ndarray) -> tuple[float, float, float, float, float, float]:
    """(min, Q1, median, mean, Q3, max) with linear-interpolation quantiles."""
    values = np.asarray(values, dtype=np.float64)
    q1, median, q3 = np.quantile(values, [0.25, 0.5, 0.75])
    return (float(values.min()), float(q1), float(median),
            float(values.mean()), float(q3), float(values.max()))


def _select_methods(
    values: np.ndarray, cls, cfg: BenchmarkConfig, registry: MethodRegistry
) -> tuple[Optional[ErrorRow], Optional[ErrorRow], dict[str, str]]:
    """Benchmark and pick the per-mechanism winner.

    A series whose longest gap-free segment is too short to benchmark falls
    back to linear interpolation for every mechanism.
    """
    try:
        mcar_err, mar_err = evaluate_methods(values, cls, cfg, registry)
    except SegmentTooShort as exc:
        logger.warning("benchmark skipped (%s); using %s", exc, FALLBACK_METHOD)
        mcar_err, mar_err = None, None
    order = list(cfg.methods)
    best = {
        "mcar": select_best(mcar_err, order) if mcar_err else FALLBACK_METHOD,
        "mar": select_best(mar_err, order) if mar_err else FALLBACK_METHOD,
    }
    return mcar_err, mar_err, best


def clean(
    table: RawTable,
    date_format: str,
    time: Optional[str] = None,
    value: Optional[str] = None,
    imp_methods: Sequence[str] = DEFAULT_METHODS,
    replace_outliers: bool = True,
    benchmark_cfg: Optional[BenchmarkConfig] = None,
    anomaly_cfg: Optional[anomaly_mod.AnomalyConfig] = None,
    registry: Optional[MethodRegistry] = None,
) -> CleanResult:
    """Clean one univariate series out of a raw string table.

    Stages run in a fixed order: column selection and type coercion,
    timeline repair (missing/duplicate timestamps), benchmark-driven
    imputation of missing values, then outlier detection and replacement.
    Every mutation appends a change-log entry.  Deterministic for a fixed
    benchmark seed.

    ``replace_outliers=False`` (or ``anomaly_cfg.replace=False``) skips the
    outlier stage entirely.  Values nulled by conflicting duplicates count
    as missing values from the imputation stage onward.
    """
    registry = registry if registry is not None else default_registry()
    cfg = benchmark_cfg if benchmark_cfg is not None else BenchmarkConfig(
        methods=tuple(imp_methods)
    )
    a_cfg = anomaly_cfg if anomaly_cfg is not None else anomaly_mod.AnomalyConfig()
    do_replace = replace_outliers and a_cfg.replace

    change_log: list[ChangeEntry] = []

    def log_change(kind: str, time_=None, before=None, after=None) -> None:
        change_log.append(ChangeEntry(
            id=len(change_log), kind=kind, time=time_, before=before, after=after,
        ))

    with _stage("parse"):
        order = parse_format_order(date_format)
        time_texts, value_texts = select_columns(table, time, value)
        instants, _, parse_failures = parse_column(time_texts, [order])
        values, coerce_failures = coerce_values(value_texts)
        for _ in parse_failures:
            log_change("timestamp_parse_failed")
        for i in coerce_failures:
            log_change("value_coercion_failed",
                       time_=instants[i] if instants[i] is not None else None)
        keep = [i for i, t in enumerate(instants) if t is not None]
        raw = RawSeries(
            times=np.array([instants[i] for i in keep], dtype=np.int64),
            values=values[keep],
        )

    with _stage("timeline"):
        series, missing_ts, duplicate_ts, conflicts = regularize(raw)
        conflict_set = set(conflicts)
        for t in missing_ts:
            log_change("inserted_timestamp", time_=t)
        for t in duplicate_ts:
            if t in conflict_set:
                log_change("conflicting_duplicate_nulled", time_=t)
            else:
                log_change("deduplicated", time_=t)

    times = series.instants()

    with _stage("impute"):
        cls = classify_gaps(series.values)
        annotations: dict[int, tuple[str, str]] = {}
        if cls.runs:
            mcar_err, mar_err, best = _select_methods(
                series.values, cls, cfg, registry
            )
            filled, annotations = impute_by_mechanism(
                series.values, cls, best, registry
            )
            for i in sorted(annotations):
                log_change("imputed_missing", time_=int(times[i]),
                           after=float(filled[i]))
        else:
            mcar_err, mar_err = None, None
            filled = series.values.copy()

    outlier_records = []
    outlier_mcar_err: Optional[ErrorRow] = None
    outlier_mar_err: Optional[ErrorRow] = None
    outlier_methods: dict[int, str] = {}
    final_values = filled
    if do_replace:
        with _stage("outliers"):
            indices = anomaly_mod.detect_outliers(filled, a_cfg, series.interval)
            (final_values, outlier_records, outlier_mcar_err,
             outlier_mar_err, outlier_methods) = anomaly_mod.replace_outliers(
                filled, times, indices, cfg, registry
            )
            for i in sorted(outlier_methods):
                log_change("outlier_replaced", time_=int(times[i]),
                           before=float(filled[i]), after=float(final_values[i]))

    n = len(series)
    missing_type = [MISSING_NONE] * n
    method_used: list[Optional[str]] = [None] * n
    is_outlier = np.zeros(n, dtype=bool)
    orig_value = np.full(n, np.nan)
    for i, (mech, mid) in annotations.items():
        missing_type[i] = mech
        method_used[i] = mid
    for i, mid in outlier_methods.items():
        method_used[i] = mid
        is_outlier[i] = True
        orig_value[i] = filled[i]

    return CleanResult(
        clean_data=CleanData(times, final_values, missing_type, method_used,
                             is_outlier, orig_value),
        missing_ts=missing_ts,
        duplicate_ts=duplicate_ts,
        imp_methods=list(cfg.methods),
        mcar_err=mcar_err,
        mar_err=mar_err,
        outliers=outlier_records,
        outlier_mcar_err=outlier_mcar_err,
        outlier_mar_err=outlier_mar_err,
        change_log=change_log,
    )

"""Seasonal-trend-remainder decomposition and IQR-based outlier handling.

The decomposition is additive: two inner passes of {detrend, per-phase
seasonal from cycle subseries, deseasonalize, loess trend}.  The remainder
is defined as the exact residual value - seasonal - trend, so the identity
holds bit for bit.  Outliers are remainder values outside the fences
Q1 - m*IQR and Q3 + m*IQR with m = 0.15 / alpha (alpha 0.05 -> classic
3*IQR fences); they can be re-imputed through the same benchmark-driven
machinery used for missing values.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .benchmark import (
    BenchmarkConfig,
    classify_gaps,
    evaluate_methods,
    impute_by_mechanism,
    select_best,
)
from .errors import SegmentTooShort, SeriesTooShort
from .imputation import MethodRegistry
from .model import ErrorRow, OutlierRecord
from .loess import loess_smooth

logger = logging.getLogger(__name__)

# Candidate seasonalities tried per sampling interval, in lags.
_PERIOD_CANDIDATES = {
    3600: (24, 168),      # hourly: daily and weekly cycles
    86400: (7, 365),      # daily: weekly and yearly cycles
}
_MIN_AUTOCORRELATION = 0.1


@dataclass(frozen=True)
class Decomposition:
    seasonal: np.ndarray
    trend: np.ndarray
    remainder: np.ndarray
    period: int


@dataclass(frozen=True)
class AnomalyConfig:
    alpha: float = 0.05
    period: Optional[int] = None   # auto-detected when absent
    replace: bool = True

    def __post_init__(self) -> None:
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must be in (0, 1)")
        if self.period is not None and self.period < 1:
            raise ValueError("period must be positive")


def _autocorrelation(values: np.ndarray, lag: int) -> float:
    x = values - values.mean()
    denom = float(np.dot(x, x))
    if denom == 0.0 or lag >= len(x):
        return 0.0
    return float(np.dot(x[:-lag], x[lag:]) / denom)


def infer_period(values: np.ndarray, interval: int) -> int:
    """Pick the seasonality (in samples) with the strongest autocorrelation.

    Hourly and daily intervals try their natural calendar cycles first;
    anything else falls back to the first local autocorrelation maximum at
    lag >= 2.  Returns 1 (no seasonality) when nothing correlates above
    0.1.

    Raises
    ------
    SeriesTooShort
    """
    values = np.asarray(values, dtype=np.float64)
    n = len(values)
    if n < 8:
        raise SeriesTooShort(f"period inference needs >= 8 points, have {n}")
    candidates = [
        c for c in _PERIOD_CANDIDATES.get(interval, ())
        if 2 <= c <= n // 2
    ]
    if not candidates:
        acf = np.array([_autocorrelation(values, lag)
                        for lag in range(1, n // 2 + 1)])
        for lag in range(2, len(acf)):
            if acf[lag - 1] > acf[lag - 2] and acf[lag - 1] >= acf[lag]:
                candidates = [lag]
                break
        if not candidates:
            return 1
    best = max(candidates, key=lambda c: _autocorrelation(values, c))
    if _autocorrelation(values, best) < _MIN_AUTOCORRELATION:
        return 1
    return best


def _trend_window(period: int) -> int:
    width = max(7, int(np.ceil(1.5 * period + 1)))
    return width if width % 2 == 1 else width + 1


def _exact_residual(y: np.ndarray, seasonal: np.ndarray, trend: np.ndarray) -> np.ndarray:
    """Residual r with seasonal + trend + r == y, bit for bit.

    r starts as the rounded residual and gets nudged by sub-ulp amounts
    until the left-to-right sum reproduces y.  The one case IEEE-754 makes
    unfixable is a point whose fitted seasonal+trend lies binades above
    the value itself (the sum grid then steps right over y); such points
    keep the honest rounded residual.
    """
    u = seasonal + trend
    r = y - u
    for _ in range(4):
        bad = (seasonal + trend + r) != y
        if not bad.any():
            return r
        r[bad] += y[bad] - (u[bad] + r[bad])
    for _ in range(4):
        total = seasonal + trend + r
        bad = total != y
        if not bad.any():
            return r
        r[bad] = np.nextafter(
            r[bad], np.where(total[bad] < y[bad], np.inf, -np.inf)
        )
    return r


def decompose(values: np.ndarray, period: int) -> Decomposition:
    """Additive seasonal + trend + remainder split.

    Period 1 means no seasonality: the trend is a loess smooth and the
    seasonal component is identically zero.  For period > 1 the series
    must be at least two full cycles long.

    Raises
    ------
    SeriesTooShort
    """
    y = np.asarray(values, dtype=np.float64)
    n = len(y)
    if np.isnan(y).any():
        raise ValueError("decompose needs a gap-free series")
    if period < 1:
        raise ValueError("period must be >= 1")
    if period == 1:
        if n < 4:
            raise SeriesTooShort(f"need >= 4 points, have {n}")
        trend = loess_smooth(y, _trend_window(1))
        seasonal = np.zeros(n)
        return Decomposition(seasonal, trend,
                             _exact_residual(y, seasonal, trend), 1)
    if n < 2 * period:
        raise SeriesTooShort(
            f"need >= 2 full cycles ({2 * period} points), have {n}"
        )
    trend = np.zeros(n)
    seasonal = np.zeros(n)
    phase = np.arange(n) % period
    for _ in range(2):
        detrended = y - trend
        phase_means = np.zeros(period)
        for p in range(period):
            phase_means[p] = detrended[phase == p].mean()
        seasonal = phase_means[phase]
        seasonal = seasonal - seasonal.mean()
        trend = loess_smooth(y - seasonal, _trend_window(period))
    return Decomposition(seasonal, trend,
                         _exact_residual(y, seasonal, trend), period)


def iqr_bounds(remainder: np.ndarray, alpha: float = 0.05) -> tuple[float, float]:
    """Fences Q1 - m*IQR and Q3 + m*IQR with m = 0.15 / alpha.

    A zero IQR collapses both fences onto the median, so anything
    off-median flags.
    """
    remainder = np.asarray(remainder, dtype=np.float64)
    if len(remainder) == 0:
        raise ValueError("empty remainder")
    q1, q3 = np.quantile(remainder, [0.25, 0.75])
    iqr = q3 - q1
    if iqr == 0.0:
        median = float(np.quantile(remainder, 0.5))
        return median, median
    m = 0.15 / alpha
    return float(q1 - m * iqr), float(q3 + m * iqr)


def detect_outliers(
    values: np.ndarray, cfg: AnomalyConfig, interval: int
) -> list[int]:
    """Indices whose remainder falls outside the IQR fences, ascending."""
    values = np.asarray(values, dtype=np.float64)
    if np.isnan(values).any():
        raise ValueError("outlier detection runs on the imputed, gap-free series")
    period = cfg.period if cfg.period is not None else infer_period(values, interval)
    dec = decompose(values, period)
    lo, hi = iqr_bounds(dec.remainder, cfg.alpha)
    flagged = (dec.remainder < lo) | (dec.remainder > hi)
    return [int(i) for i in np.flatnonzero(flagged)]


def replace_outliers(
    values: np.ndarray,
    times: np.ndarray,
    indices: list[int],
    cfg: BenchmarkConfig,
    registry: MethodRegistry,
) -> tuple[np.ndarray, list[OutlierRecord],
           Optional[ErrorRow], Optional[ErrorRow], dict[int, str]]:
    """Null the flagged values and re-impute them benchmark-style.

    Isolated outliers route through the MCAR winner, consecutive runs
    through the MAR winner.  When the series is too short to benchmark,
    linear interpolation is selected for every mechanism.  Returns the
    repaired values, the outlier records, both error rows, and
    {index: method id} for annotation.
    """
    values = np.asarray(values, dtype=np.float64)
    if not indices:
        return values.copy(), [], None, None, {}
    masked = values.copy()
    masked[np.asarray(indices, dtype=int)] = np.nan
    cls = classify_gaps(masked)
    try:
        mcar_err, mar_err = evaluate_methods(masked, cls, cfg, registry)
    except SegmentTooShort as exc:
        logger.warning("outlier benchmark skipped (%s); using na_interpolation", exc)
        mcar_err, mar_err = None, None
    order = list(cfg.methods)
    best = {
        "mcar": select_best(mcar_err, order) if mcar_err else "na_interpolation",
        "mar": select_best(mar_err, order) if mar_err else "na_interpolation",
    }
    filled, annotations = impute_by_mechanism(masked, cls, best, registry)
    records = []
    method_by_index: dict[int, str] = {}
    for i in sorted(indices):
        _, method_id = annotations[i]
        method_by_index[i] = method_id
        records.append(OutlierRecord(
            time=int(times[i]),
            value=float(filled[i]),
            orig_value=float(values[i]),
            method_used=method_id,
        ))
    return filled, records, mcar_err, mar_err, method_by_index

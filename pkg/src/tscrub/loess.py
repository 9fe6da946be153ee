"""Degree-1 loess smoothing on an evenly spaced index.

Interior points see a symmetric window, where the weighted linear fit at
the window center collapses to a weighted mean, so the bulk of the series
is one convolution with a normalized tricube kernel.  Points within half a
window of either edge get individual weighted regressions, which keeps the
smoother exact on straight lines all the way to the boundary.
"""

from __future__ import annotations

import numpy as np


def _tricube(u: np.ndarray) -> np.ndarray:
    w = (1.0 - np.clip(np.abs(u), 0.0, 1.0) ** 3) ** 3
    return w


def _fit_at(x: np.ndarray, y: np.ndarray, w: np.ndarray, x0: float) -> float:
    sw = w.sum()
    swx = (w * x).sum()
    swy = (w * y).sum()
    swxx = (w * x * x).sum()
    swxy = (w * x * y).sum()
    denom = sw * swxx - swx * swx
    if denom <= 0 or not np.isfinite(denom):
        return swy / sw if sw > 0 else float(np.mean(y))
    slope = (sw * swxy - swx * swy) / denom
    intercept = (swy - slope * swx) / sw
    return intercept + slope * x0


def loess_smooth(values: np.ndarray, window: int) -> np.ndarray:
    """Smooth ``values`` with a loess window of ``window`` points.

    ``window`` is clamped to an odd size within the series length.
    """
    y = np.asarray(values, dtype=np.float64)
    n = len(y)
    if n == 0:
        return y.copy()
    q = min(window, n if n % 2 == 1 else n - 1)
    if q % 2 == 0:
        q -= 1
    if q < 3:
        return y.copy()
    h = (q - 1) // 2
    out = np.empty(n)
    # interior: weighted mean with the symmetric tricube kernel
    kernel = _tricube(np.arange(-h, h + 1) / h)
    kernel /= kernel.sum()
    if n >= q:
        out[h:n - h] = np.convolve(y, kernel, mode="valid")
    # boundaries: per-point weighted regression over the q nearest points
    x_left = np.arange(q, dtype=np.float64)
    for i in range(min(h, n)):
        d_max = max(q - 1 - i, 1)
        w = _tricube((x_left - i) / d_max)
        out[i] = _fit_at(x_left, y[:q], w, float(i))
    x_right = np.arange(n - q, n, dtype=np.float64)
    for i in range(max(n - h, 0), n):
        d_max = max(i - (n - q), 1)
        w = _tricube((x_right - i) / d_max)
        out[i] = _fit_at(x_right, y[n - q:], w, float(i))
    return out

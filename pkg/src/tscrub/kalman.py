"""Local linear trend state-space model: Kalman filter, fixed-interval
smoother, and maximum-likelihood variance estimation.

The model has state (level l, slope b) with transitions

    l' = l + b + xi,   var(xi) = level_var
    b' = b + zeta,     var(zeta) = slope_var

and observation y = l + eps, var(eps) = obs_var.  Time steps with an absent
observation (NaN) skip the measurement update, which is what lets the
smoother reconstruct values inside gaps.

The 2x2 algebra is unrolled to scalars so the per-step loop stays cheap;
when numba is importable the loops are JIT-compiled, otherwise they run as
plain Python.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import NonFiniteLikelihood, TooFewObserved

try:  # optional acceleration
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

VAR_FLOOR = 1e-12
DIFFUSE_VARIANCE = 1e7
_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class KalmanModel:
    level_var: float
    slope_var: float
    obs_var: float
    loglik: float


@njit(cache=True)
def _filter_loglik(y, level_var, slope_var, obs_var, init_level):
    """One filter pass returning only the Gaussian log-likelihood."""
    n = y.shape[0]
    l = init_level
    b = 0.0
    p11 = DIFFUSE_VARIANCE
    p12 = 0.0
    p22 = DIFFUSE_VARIANCE
    ll = 0.0
    for t in range(n):
        yt = y[t]
        if not np.isnan(yt):
            v = yt - l
            f = p11 + obs_var
            if f <= 0.0:
                return -np.inf
            k1 = p11 / f
            k2 = p12 / f
            l += k1 * v
            b += k2 * v
            ll += -0.5 * (_LOG_2PI + np.log(f) + v * v / f)
            np11 = p11 - k1 * p11
            np12 = p12 - k1 * p12
            np22 = p22 - k2 * p12
            p11, p12, p22 = np11, np12, np22
        # predict next state
        l += b
        np11 = p11 + 2.0 * p12 + p22 + level_var
        np12 = p12 + p22
        np22 = p22 + slope_var
        p11, p12, p22 = np11, np12, np22
    return ll


@njit(cache=True)
def _filter_store(y, level_var, slope_var, obs_var, init_level):
    """Filter pass that stores predicted/filtered moments for smoothing."""
    n = y.shape[0]
    a_pred = np.empty((n, 2))
    p_pred = np.empty((n, 3))   # p11, p12, p22 of the one-step-ahead cov
    a_filt = np.empty((n, 2))
    p_filt = np.empty((n, 3))
    l = init_level
    b = 0.0
    p11 = DIFFUSE_VARIANCE
    p12 = 0.0
    p22 = DIFFUSE_VARIANCE
    for t in range(n):
        a_pred[t, 0] = l
        a_pred[t, 1] = b
        p_pred[t, 0] = p11
        p_pred[t, 1] = p12
        p_pred[t, 2] = p22
        yt = y[t]
        if not np.isnan(yt):
            v = yt - l
            f = p11 + obs_var
            k1 = p11 / f
            k2 = p12 / f
            l += k1 * v
            b += k2 * v
            np11 = p11 - k1 * p11
            np12 = p12 - k1 * p12
            np22 = p22 - k2 * p12
            p11, p12, p22 = np11, np12, np22
        a_filt[t, 0] = l
        a_filt[t, 1] = b
        p_filt[t, 0] = p11
        p_filt[t, 1] = p12
        p_filt[t, 2] = p22
        l += b
        np11 = p11 + 2.0 * p12 + p22 + level_var
        np12 = p12 + p22
        np22 = p22 + slope_var
        p11, p12, p22 = np11, np12, np22
    return a_pred, p_pred, a_filt, p_filt


@njit(cache=True)
def _rts_smooth(a_pred, p_pred, a_filt, p_filt):
    """Backward Rauch-Tung-Striebel pass over stored filter moments."""
    n = a_filt.shape[0]
    smoothed = np.empty((n, 2))
    smoothed[n - 1, 0] = a_filt[n - 1, 0]
    smoothed[n - 1, 1] = a_filt[n - 1, 1]
    for t in range(n - 2, -1, -1):
        # M = P_filt[t] @ T', with T = [[1, 1], [0, 1]]
        m11 = p_filt[t, 0] + p_filt[t, 1]
        m12 = p_filt[t, 1]
        m21 = p_filt[t, 1] + p_filt[t, 2]
        m22 = p_filt[t, 2]
        # inverse of the next predicted covariance
        a = p_pred[t + 1, 0]
        bb = p_pred[t + 1, 1]
        c = p_pred[t + 1, 2]
        det = a * c - bb * bb
        if det <= 0.0 or not np.isfinite(det):
            smoothed[t, 0] = a_filt[t, 0]
            smoothed[t, 1] = a_filt[t, 1]
            continue
        i11 = c / det
        i12 = -bb / det
        i22 = a / det
        j11 = m11 * i11 + m12 * i12
        j12 = m11 * i12 + m12 * i22
        j21 = m21 * i11 + m22 * i12
        j22 = m21 * i12 + m22 * i22
        d0 = smoothed[t + 1, 0] - a_pred[t + 1, 0]
        d1 = smoothed[t + 1, 1] - a_pred[t + 1, 1]
        smoothed[t, 0] = a_filt[t, 0] + j11 * d0 + j12 * d1
        smoothed[t, 1] = a_filt[t, 1] + j21 * d0 + j22 * d1
    return smoothed


def _first_observed(values: np.ndarray) -> float:
    idx = np.flatnonzero(~np.isnan(values))
    if len(idx) == 0:
        raise TooFewObserved("no observed values")
    return float(values[idx[0]])


def kalman_loglik(
    values: np.ndarray, level_var: float, slope_var: float, obs_var: float
) -> float:
    """Gaussian log-likelihood of the model at the given variances."""
    y = np.ascontiguousarray(values, dtype=np.float64)
    return float(_filter_loglik(
        y,
        max(level_var, VAR_FLOOR),
        max(slope_var, VAR_FLOOR),
        max(obs_var, VAR_FLOOR),
        _first_observed(y),
    ))


def kalman_smooth(
    values: np.ndarray, level_var: float, slope_var: float, obs_var: float
) -> tuple[np.ndarray, np.ndarray]:
    """Smoothed (level, slope) sequences at the given variances."""
    y = np.ascontiguousarray(values, dtype=np.float64)
    moments = _filter_store(
        y,
        max(level_var, VAR_FLOOR),
        max(slope_var, VAR_FLOOR),
        max(obs_var, VAR_FLOOR),
        _first_observed(y),
    )
    smoothed = _rts_smooth(*moments)
    return smoothed[:, 0], smoothed[:, 1]


def fit_kalman(values: np.ndarray, max_iter: int = 500) -> KalmanModel:
    """Maximize the log-likelihood over the three variances.

    The search is derivative-free: Nelder-Mead over the log-variances,
    started at the log of the sample variance of first differences of the
    observed values, capped at ``max_iter`` iterations and converged when
    the simplex shrinks below 1e-8 in log-space.  Variances are floored at
    1e-12 so the filter never divides by zero.

    Raises
    ------
    TooFewObserved
        Fewer than 3 observed values.
    NonFiniteLikelihood
        The optimum is not finite.
    """
    y = np.ascontiguousarray(values, dtype=np.float64)
    observed = y[~np.isnan(y)]
    if len(observed) < 3:
        raise TooFewObserved(
            f"need at least 3 observed values, have {len(observed)}"
        )
    if np.ptp(observed) == 0.0:
        # Degenerate likelihood: a constant series is reproduced exactly by
        # the zero-noise model, so skip optimization.
        ll = kalman_loglik(y, VAR_FLOOR, VAR_FLOOR, VAR_FLOOR)
        return KalmanModel(VAR_FLOOR, VAR_FLOOR, VAR_FLOOR, ll)
    init_level = _first_observed(y)
    diff_var = float(np.var(np.diff(observed)))
    if not (diff_var > 0 and math.isfinite(diff_var)):
        diff_var = max(float(np.var(observed)), 1.0)
    x0 = np.log(np.array([diff_var, diff_var, diff_var]))

    def negloglik(logv: np.ndarray) -> float:
        variances = np.exp(np.clip(logv, math.log(VAR_FLOOR), 700.0))
        ll = _filter_loglik(y, variances[0], variances[1], variances[2],
                            init_level)
        return -ll if math.isfinite(ll) else 1e300

    res = minimize(
        negloglik, x0, method="Nelder-Mead",
        options={"maxiter": max_iter, "xatol": 1e-8, "fatol": 1e-8},
    )
    best = np.exp(np.clip(res.x, math.log(VAR_FLOOR), 700.0))
    loglik = -negloglik(res.x)
    if not math.isfinite(loglik):
        raise NonFiniteLikelihood("model fit did not reach a finite likelihood")
    return KalmanModel(float(best[0]), float(best[1]), float(best[2]), loglik)


def impute_kalman(values: np.ndarray) -> np.ndarray:
    """Fill gaps with the smoothed level under the fitted model."""
    y = np.ascontiguousarray(values, dtype=np.float64)
    gaps = np.isnan(y)
    if not gaps.any():
        return y.copy()
    observed = y[~gaps]
    if len(observed) >= 1 and np.ptp(observed) == 0.0:
        # Constant observations: the zero-noise model fills exactly, and the
        # shortcut also rescues series too short to fit.
        out = y.copy()
        out[gaps] = observed[0]
        return out
    model = fit_kalman(y)
    level, _ = kalman_smooth(y, model.level_var, model.slope_var, model.obs_var)
    out = y.copy()
    out[gaps] = level[gaps]
    return out

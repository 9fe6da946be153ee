import numpy as np
import pytest

from tscrub.errors import TooFewObserved
from tscrub.kalman import (
    VAR_FLOOR,
    fit_kalman,
    impute_kalman,
    kalman_loglik,
    kalman_smooth,
)


class TestFit:
    def test_constant_series_degenerate(self):
        model = fit_kalman(np.full(50, 5.0))
        assert model.level_var == VAR_FLOOR
        assert model.slope_var == VAR_FLOOR
        assert model.obs_var == VAR_FLOOR
        level, _ = kalman_smooth(np.full(50, 5.0), model.level_var,
                                 model.slope_var, model.obs_var)
        assert np.abs(level - 5.0).max() < 1e-6

    def test_linear_series_slope(self):
        y = np.arange(1.0, 51.0)
        model = fit_kalman(y)
        _, slope = kalman_smooth(y, model.level_var, model.slope_var,
                                 model.obs_var)
        assert abs(slope[len(y) // 2] - 1.0) < 1e-3

    def test_two_observed_rejected(self):
        with pytest.raises(TooFewObserved):
            fit_kalman(np.array([1.0, np.nan, 2.0]))

    def test_loglik_dominates_brute_force_grid(self):
        rng = np.random.default_rng(11)
        y = np.arange(1.0, 51.0) + rng.normal(0, 0.5, 50)
        y[[4, 17, 23, 36, 44]] = np.nan
        model = fit_kalman(y)
        observed = y[~np.isnan(y)]
        center = np.log(np.var(np.diff(observed)))
        axis = center + np.linspace(-4.0, 4.0, 7)
        best_grid = -np.inf
        for lv in axis:
            for sv in axis:
                for ov in axis:
                    ll = kalman_loglik(y, np.exp(lv), np.exp(sv), np.exp(ov))
                    best_grid = max(best_grid, ll)
        assert model.loglik >= best_grid - 1e-6


class TestSmooth:
    def test_smoothing_consistency_as_obs_var_shrinks(self):
        rng = np.random.default_rng(3)
        y = np.sin(np.arange(200) / 9.0) * 10 + rng.normal(0, 1.0, 200)
        rmses = []
        for obs_var in (10.0, 1.0, 0.01):
            level, _ = kalman_smooth(y, 0.1, 0.01, obs_var)
            rmses.append(float(np.sqrt(np.mean((level - y) ** 2))))
        assert rmses[0] >= rmses[1] >= rmses[2]

    def test_gap_free_identity_when_obs_noise_tiny(self):
        y = np.arange(30, dtype=np.float64)
        level, _ = kalman_smooth(y, 1.0, 1.0, 1e-10)
        assert np.abs(level - y).max() < 1e-4


class TestImpute:
    def test_linear_ramp_interior_gap(self):
        y = np.arange(1.0, 11.0)
        y[4] = np.nan
        out = impute_kalman(y)
        assert abs(out[4] - 5.0) < 0.2

    def test_scattered_gaps_on_long_ramp(self):
        truth = np.arange(1.0, 51.0)
        y = truth.copy()
        gaps = [4, 17, 23, 36, 44]
        y[gaps] = np.nan
        out = impute_kalman(y)
        assert np.abs(out[gaps] - truth[gaps]).max() < 0.2

    def test_constant_with_gap(self):
        out = impute_kalman(np.array([5.0, np.nan, 5.0]))
        assert abs(out[1] - 5.0) < 1e-6

    def test_no_gaps_identity(self):
        y = np.array([3.0, 1.0, 4.0, 1.5])
        assert np.array_equal(impute_kalman(y), y)

    def test_observed_values_unchanged(self):
        rng = np.random.default_rng(8)
        y = rng.normal(0, 1, 60)
        y[[10, 30, 31, 50]] = np.nan
        out = impute_kalman(y)
        observed = ~np.isnan(y)
        assert np.array_equal(out[observed], y[observed])

import math

import numpy as np
import pytest

from robustmean import (
    ConfigurationError,
    FilterConfig,
    FilterExhaustedError,
    MomentProfile,
    cov_bound_hint,
    default_steps,
    filter_multivariate,
    filter_univariate,
    stopping_cap,
    top_eigenpair,
)
from robustmean.filtering import STOP_CAPPED, STOP_FIXED_STEPS, STOP_THRESHOLD


class TestTopEigenpair:
    def test_matches_dense_eigensolver(self):
        rng = np.random.default_rng(0)
        for trial in range(20):
            p = rng.integers(2, 12)
            a = rng.standard_normal((p, p))
            mat = a @ a.T  # PSD
            lam, v = top_eigenpair(mat, seed=trial)
            ref = np.linalg.eigvalsh(mat)[-1]
            assert lam == pytest.approx(ref, rel=1e-8)
            # eigenpair residual contract
            assert np.linalg.norm(mat @ v - lam * v) <= 1e-8 * lam
            assert np.linalg.norm(v) == pytest.approx(1.0)

    def test_zero_matrix(self):
        lam, v = top_eigenpair(np.zeros((4, 4)))
        assert lam == 0.0
        np.testing.assert_array_equal(v, [1.0, 0.0, 0.0, 0.0])

    def test_one_dimensional(self):
        lam, v = top_eigenpair(np.array([[2.5]]))
        assert lam == 2.5
        assert v.shape == (1,)


class TestFilterMechanics:
    def test_fixed_steps_removes_exactly_that_many(self):
        rng = np.random.default_rng(1)
        data = rng.standard_normal((60, 3))
        rep = filter_multivariate(data, FilterConfig(
            stop_mode=STOP_FIXED_STEPS, steps=7, seed=5))
        assert rep.iterations == 7
        assert len(rep.removed_indices) == 7
        assert len(set(rep.removed_indices)) == 7
        survivors = np.delete(data, list(rep.removed_indices), axis=0)
        np.testing.assert_allclose(rep.estimate, survivors.mean(axis=0))

    def test_zero_steps_returns_sample_mean(self):
        data = np.arange(12.0).reshape(6, 2)
        rep = filter_multivariate(data, FilterConfig(
            stop_mode=STOP_FIXED_STEPS, steps=0))
        np.testing.assert_allclose(rep.estimate, data.mean(axis=0))
        assert rep.iterations == 0

    def test_threshold_stop_reports_small_eigenvalue(self):
        rng = np.random.default_rng(2)
        data = rng.standard_normal((500, 4))
        data[:10] += 40.0
        cfg = FilterConfig(cov_bound=1.0, threshold_factor=32.0,
                           stop_mode=STOP_THRESHOLD, seed=3)
        rep = filter_multivariate(data, cfg)
        assert rep.final_top_eigenvalue < 32.0
        # most gross outliers gone, and the estimate is near the inlier mean
        assert sum(1 for i in rep.removed_indices if i < 10) >= 7
        assert np.linalg.norm(rep.estimate) < 1.0

    def test_capped_mode_stops_at_cap(self):
        rng = np.random.default_rng(3)
        data = rng.standard_normal((100, 3))
        cfg = FilterConfig(cov_bound=1e-9, stop_mode=STOP_CAPPED, steps=4)
        rep = filter_multivariate(data, cfg)
        assert rep.iterations == 4  # threshold unreachable, cap binds

    def test_removal_probability_proportional_to_projection(self):
        # 99 tight points and one at distance d: the outlier carries
        # essentially all of the squared projection mass, so it is removed
        # first almost always.  Oracle: exact first-round probability.
        data = np.zeros((100, 2))
        rng = np.random.default_rng(8)
        data[:99] = 0.01 * rng.standard_normal((99, 2))
        data[99] = [25.0, 0.0]
        mean = data.mean(axis=0)
        cov = (data - mean).T @ (data - mean) / 100
        lam, v = top_eigenpair(cov)
        scores = ((data - mean) @ v) ** 2
        p_outlier = scores[99] / scores.sum()
        assert p_outlier > 0.98
        hits = 0
        trials = 400
        for s in range(trials):
            rep = filter_multivariate(data, FilterConfig(
                stop_mode=STOP_FIXED_STEPS, steps=1, seed=s))
            hits += rep.removed_indices[0] == 99
        # binomial(400, p_outlier): allow 4 standard deviations of slack
        sd = math.sqrt(trials * p_outlier * (1 - p_outlier))
        assert abs(hits - trials * p_outlier) <= 4 * sd + 1

    def test_deterministic_given_seed(self):
        rng = np.random.default_rng(4)
        data = rng.standard_normal((40, 2))
        cfg = FilterConfig(stop_mode=STOP_FIXED_STEPS, steps=5, seed=11)
        r1 = filter_multivariate(data, cfg)
        r2 = filter_multivariate(data, cfg)
        assert r1.removed_indices == r2.removed_indices
        np.testing.assert_array_equal(r1.estimate, r2.estimate)

    def test_identical_points_stop_without_scores(self):
        data = np.ones((10, 3))
        rep = filter_multivariate(data, FilterConfig(
            cov_bound=0.0, stop_mode=STOP_THRESHOLD))
        np.testing.assert_allclose(rep.estimate, np.ones(3))
        assert rep.final_top_eigenvalue == 0.0

    def test_exhaustion_raises(self):
        data = np.array([[0.0], [1.0], [2.0]])
        with pytest.raises(FilterExhaustedError):
            filter_multivariate(data, FilterConfig(
                stop_mode=STOP_FIXED_STEPS, steps=3))

    def test_univariate_wraps_column(self):
        vals = [0.0, 0.1, -0.1, 0.05, 30.0]
        rep = filter_univariate(vals, FilterConfig(
            stop_mode=STOP_FIXED_STEPS, steps=1, seed=0))
        assert rep.estimate.shape == (1,)
        assert rep.removed_indices == (4,)


class TestBudgets:
    def test_default_steps(self):
        assert default_steps(0.05) == math.ceil(2 * math.log(20))  # 6
        assert default_steps(0.05) == 6

    def test_stopping_cap_formula(self):
        assert stopping_cap(100, 90, 0.05) == math.ceil(
            18 * math.log(20) + 30)
        with pytest.raises(ConfigurationError):
            stopping_cap(10, 20, 0.05)

    def test_config_validation(self):
        with pytest.raises(ConfigurationError):
            FilterConfig(cov_bound=-1.0)
        with pytest.raises(ConfigurationError):
            FilterConfig(stop_mode="fixed_steps")  # steps missing
        with pytest.raises(ConfigurationError):
            FilterConfig(stop_mode="bogus")

    def test_config_json_round_trip(self):
        cfg = FilterConfig(cov_bound=2.0, stop_mode=STOP_CAPPED, steps=9,
                           seed=4)
        assert FilterConfig.from_json_dict(cfg.to_json_dict()) == cfg


class TestCovBoundHint:
    def test_heavy_tail_k2_is_opnorm(self):
        m = MomentProfile(2, trace_sigma=20.0, opnorm_sigma=1.0)
        assert cov_bound_hint("heavy_tail", m, n=100, p=20, delta=0.05) == 1.0

    def test_heavy_tail_k1_worked_example(self):
        # opnorm 1, trace 20, p=20, delta=0.05:
        # 1 + 20 * ln(400) / ln(20) = 41.0000...
        m = MomentProfile(1, trace_sigma=20.0, opnorm_sigma=1.0)
        val = cov_bound_hint("heavy_tail", m, n=100, p=20, delta=0.05)
        assert val == pytest.approx(
            1.0 + 20.0 * math.log(400) / math.log(20))
        assert val == pytest.approx(41.0, abs=0.01)

    def test_huber_formulas(self):
        m1 = MomentProfile(1, trace_sigma=20.0, opnorm_sigma=1.0)
        v1 = cov_bound_hint("huber", m1, n=1000, p=20, delta=0.05,
                            epsilon=0.1)
        assert v1 == pytest.approx(
            1.0 + 20.0 * math.log(400) / (100.0 + math.log(20)))
        m2 = MomentProfile(2, trace_sigma=20.0, opnorm_sigma=1.0)
        v2 = cov_bound_hint("huber", m2, n=1000, p=20, delta=0.05,
                            epsilon=0.1)
        assert v2 == pytest.approx(
            1.0 + 20.0 * math.log(400)
            / math.sqrt(1e6 * 0.1 + 1000 * math.log(20)))

    def test_rejects_bad_settings(self):
        m = MomentProfile(1, trace_sigma=1.0, opnorm_sigma=1.0)
        with pytest.raises(ConfigurationError):
            cov_bound_hint("weird", m, n=10, p=2, delta=0.05)
        with pytest.raises(ConfigurationError):
            cov_bound_hint("huber", m, n=10, p=2, delta=0.05, epsilon=0.7)

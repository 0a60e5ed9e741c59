import itertools
import math

import numpy as np
import pytest

from robustmean import (
    ConfigurationError,
    CoverSet,
    NetConfig,
    build_half_cover,
    certify_cover,
    cover_from_csv,
    cover_to_csv,
    minimax_center,
    net_estimate,
)
from robustmean.netmax import minimax_objective


def grid_minimax(directions, targets, grid):
    """Oracle: evaluate the sup-gap objective on an explicit grid of points
    and return the best value found."""
    best = math.inf
    for theta in grid:
        best = min(best, minimax_objective(directions, targets, np.asarray(theta)))
    return best


class TestCoverConstruction:
    @pytest.mark.parametrize("p", [2, 3, 4])
    def test_dense_cover_is_certified(self, p):
        cover = build_half_cover(p, seed=0)
        assert cover.p == p
        worst = certify_cover(cover, probes=20_000)
        assert worst <= 0.5 + 1e-9

    def test_p1_cover_is_signs(self):
        cover = build_half_cover(1)
        assert sorted(cover.directions[:, 0]) == [-1.0, 1.0]

    def test_sparse_cover_directions_have_bounded_support(self):
        cover = build_half_cover(6, sparsity=1, seed=1)
        nnz = np.count_nonzero(cover.directions, axis=1)
        assert nnz.max() <= 2  # supports of size 2s = 2
        certify_cover(cover, probes=20_000)

    def test_sparsity_over_half_dimension_rejected(self):
        with pytest.raises(ValueError):
            build_half_cover(3, sparsity=2)

    def test_deterministic_given_seed(self):
        a = build_half_cover(3, seed=5)
        b = build_half_cover(3, seed=5)
        np.testing.assert_array_equal(a.directions, b.directions)

    def test_certify_detects_bad_cover(self):
        # Two antipodal points cannot half-cover S^2.
        bad = CoverSet(np.array([[1.0, 0, 0], [-1.0, 0, 0]]))
        with pytest.raises(Exception):
            certify_cover(bad, probes=5000)


class TestCoverCsv:
    def test_round_trip(self, tmp_path):
        cover = build_half_cover(3, seed=2)
        path = tmp_path / "cover.csv"
        cover_to_csv(cover, path)
        back = cover_from_csv(path)
        np.testing.assert_array_equal(back.directions, cover.directions)

    def test_unit_norm_enforced_on_load(self, tmp_path):
        path = tmp_path / "bad.csv"
        np.savetxt(path, np.array([[2.0, 0.0]]), delimiter=",")
        with pytest.raises(ConfigurationError):
            cover_from_csv(path)


class TestMinimaxCenter:
    def test_axis_directions_recover_coordinates(self):
        dirs = np.eye(3)
        targets = np.array([1.0, -2.0, 0.5])
        theta, diag = minimax_center(dirs, targets)
        np.testing.assert_allclose(theta, targets, atol=1e-8)
        assert diag["objective"] <= 1e-8
        assert diag["mode"] == "dense"

    def test_beats_grid_oracle(self):
        rng = np.random.default_rng(3)
        dirs = rng.standard_normal((12, 2))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        targets = dirs @ np.array([0.7, -0.3]) + 0.05 * rng.standard_normal(12)
        theta, diag = minimax_center(dirs, targets)
        grid = itertools.product(np.linspace(-2, 2, 81), repeat=2)
        assert diag["objective"] <= grid_minimax(dirs, targets, grid) + 1e-9

    def test_exact_two_direction_case(self):
        # Directions e1 with targets 0 and 1: best theta_1 is 1/2, gap 1/2.
        dirs = np.array([[1.0], [1.0]])
        theta, diag = minimax_center(dirs, [0.0, 1.0])
        assert theta[0] == pytest.approx(0.5, abs=1e-9)
        assert diag["objective"] == pytest.approx(0.5, abs=1e-9)

    def test_sparse_exhaustive_finds_support(self):
        dirs = np.eye(4)
        targets = np.array([0.01, 5.0, -0.02, 0.0])
        theta, diag = minimax_center(dirs, targets, constraint=1)
        assert diag["mode"] == "exhaustive"
        support = np.flatnonzero(theta)
        np.testing.assert_array_equal(support, [1])
        # best 1-sparse theta zeroes the big coordinate's gap
        assert diag["objective"] == pytest.approx(0.02, abs=1e-9)

    def test_sparse_never_beats_dense(self):
        rng = np.random.default_rng(4)
        dirs = rng.standard_normal((10, 4))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        targets = rng.standard_normal(10)
        _, dense = minimax_center(dirs, targets)
        _, sparse = minimax_center(dirs, targets, constraint=2)
        assert dense["objective"] <= sparse["objective"] + 1e-9

    def test_input_validation(self):
        with pytest.raises(ValueError):
            minimax_center(np.eye(2), [1.0])  # target count mismatch


class TestNetConfig:
    def test_dense_inner_confidence(self):
        cfg = NetConfig(epsilon=0.05, delta=0.05)
        assert cfg.log_inv_delta_inner(3) == pytest.approx(
            math.log(20) + 3 * math.log(5))

    def test_dense_dimension_cap(self):
        cfg = NetConfig(epsilon=0.05, delta=0.05)
        with pytest.raises(ConfigurationError):
            cfg.log_inv_delta_inner(13)

    def test_sparse_inner_confidence(self):
        cfg = NetConfig(epsilon=0.05, delta=0.05, sparsity=1)
        assert cfg.log_inv_delta_inner(20) == pytest.approx(
            math.log(20) + math.log(6 * math.e * 20))


class TestNetEstimate:
    def test_recovers_shifted_gaussian_mean(self):
        rng = np.random.default_rng(7)
        mu = np.array([1.0, -0.5])
        data = rng.standard_normal((4000, 2)) + mu
        cfg = NetConfig(epsilon=0.0, delta=0.1)
        rep = net_estimate(data, cfg, seed=0)
        assert np.linalg.norm(rep.estimate - mu) < 0.25
        assert rep.diagnostics["cover_size"] >= 4

    def test_resists_point_mass_contamination(self):
        rng = np.random.default_rng(8)
        n = 4000
        data = rng.standard_normal((n, 2))
        bad = rng.random(n) < 0.05
        data[bad] = [200.0, 200.0]
        cfg = NetConfig(epsilon=0.05, delta=0.1)
        rep = net_estimate(data, cfg, seed=1)
        assert np.linalg.norm(rep.estimate) < 0.5

    def test_filter_inner_runs(self):
        rng = np.random.default_rng(9)
        data = rng.standard_normal((600, 2)) + [2.0, 0.0]
        cfg = NetConfig(epsilon=0.0, delta=0.1, inner="filter1d")
        rep = net_estimate(data, cfg, seed=2)
        assert rep.diagnostics["inner"] == "filter1d"
        assert np.linalg.norm(rep.estimate - [2.0, 0.0]) < 0.5

    def test_sparse_estimate_has_sparse_support(self):
        rng = np.random.default_rng(10)
        mu = np.zeros(6)
        mu[2] = 3.0
        data = rng.standard_normal((6000, 6)) + mu
        cfg = NetConfig(epsilon=0.0, delta=0.1, sparsity=1)
        rep = net_estimate(data, cfg, seed=3)
        assert np.count_nonzero(rep.estimate) <= 1
        assert abs(rep.estimate[2] - 3.0) < 0.6

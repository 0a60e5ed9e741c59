import math

import numpy as np
import pytest

from robustmean import (
    ConfigurationError,
    ContaminationSpec,
    DistributionSpec,
    MomentProfile,
    population_moments,
    sample_dataset,
)
from robustmean.model import LOGNORMAL_SHIFT, LOGNORMAL_VAR


def test_sampling_is_deterministic_given_seed():
    spec = DistributionSpec("lognormal", p=4)
    a = sample_dataset(spec, 50, seed=42).data
    b = sample_dataset(spec, 50, seed=42).data
    c = sample_dataset(spec, 50, seed=43).data
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_gaussian_respects_covariance():
    cov = np.diag([4.0, 1.0])
    spec = DistributionSpec("gaussian", p=2, covariance=cov)
    data = sample_dataset(spec, 200_000, seed=0).data
    emp = data.T @ data / data.shape[0]
    np.testing.assert_allclose(emp, cov, atol=0.05)


def test_lognormal_is_centered():
    spec = DistributionSpec("lognormal", p=1)
    data = sample_dataset(spec, 400_000, seed=7).data
    # se of the mean is sqrt(var/n) ~ 0.0034; allow 4 sigma
    assert abs(data.mean()) < 4 * math.sqrt(LOGNORMAL_VAR / data.shape[0])
    assert abs(LOGNORMAL_SHIFT - math.exp(0.5)) < 1e-15


def test_pareto_is_centered_and_positive_skewed():
    spec = DistributionSpec("pareto", p=1, tail_beta=5.0)
    data = sample_dataset(spec, 400_000, seed=11).data
    var = 5.0 / (16.0 * 3.0)
    assert abs(data.mean()) < 4 * math.sqrt(var / data.shape[0])
    assert data.min() >= 1.0 - 5.0 / 4.0 - 1e-12  # support is [1, inf) shifted


def test_contamination_rate_matches_epsilon():
    q = ContaminationSpec("point_mass", location=[100.0])
    spec = DistributionSpec("lognormal", p=1, epsilon=0.2, q_spec=q)
    data = sample_dataset(spec, 100_000, seed=3).data
    frac = np.mean(data[:, 0] == 100.0)
    assert abs(frac - 0.2) < 0.006  # ~4.7 binomial sd


def test_shifted_gaussian_contamination_center():
    q = ContaminationSpec("shifted_gaussian", shift=[50.0, 0.0], scale=0.5)
    spec = DistributionSpec(
        "gaussian", p=2, covariance=np.eye(2), epsilon=0.3, q_spec=q
    )
    data = sample_dataset(spec, 50_000, seed=9).data
    outliers = data[data[:, 0] > 25.0]
    assert abs(outliers.shape[0] / data.shape[0] - 0.3) < 0.01
    np.testing.assert_allclose(outliers.mean(axis=0), [50.0, 0.0], atol=0.05)


def test_population_moments_gaussian():
    cov = np.diag([3.0, 1.0, 1.0])
    m = population_moments(DistributionSpec("gaussian", p=3, covariance=cov))
    assert m.k == 2
    assert m.trace_sigma == pytest.approx(5.0)
    assert m.opnorm_sigma == pytest.approx(3.0)
    assert m.effective_rank == pytest.approx(5.0 / 3.0)


def test_population_moments_lognormal():
    m = population_moments(DistributionSpec("lognormal", p=20))
    assert m.k == 2
    assert m.trace_sigma == pytest.approx(20 * (math.e - 1) * math.e)
    assert m.opnorm_sigma == pytest.approx((math.e - 1) * math.e)


def test_population_moments_pareto_k_by_tail():
    m3 = population_moments(DistributionSpec("pareto", p=2, tail_beta=3.0))
    assert m3.k == 1
    assert m3.opnorm_sigma == pytest.approx(3.0 / (4.0 * 1.0))
    m5 = population_moments(DistributionSpec("pareto", p=2, tail_beta=5.0))
    assert m5.k == 2
    with pytest.raises(ConfigurationError):
        population_moments(DistributionSpec("pareto", p=2, tail_beta=1.5))


def test_spec_validation():
    with pytest.raises(ConfigurationError):
        DistributionSpec("gaussian", p=2)  # missing covariance
    with pytest.raises(ConfigurationError):
        DistributionSpec("gaussian", p=2, covariance=[[1.0, 2.0], [2.0, 1.0]])
    with pytest.raises(ConfigurationError):
        DistributionSpec("lognormal", p=1, epsilon=0.1)  # no q_spec
    with pytest.raises(ConfigurationError):
        DistributionSpec("lognormal", p=1, epsilon=0.6,
                         q_spec=ContaminationSpec("point_mass", location=[1.0]))
    with pytest.raises(ConfigurationError):
        MomentProfile(k=3, trace_sigma=1.0, opnorm_sigma=1.0)


def test_json_round_trip():
    q = ContaminationSpec("point_mass", location=[5.0, 0.0])
    spec = DistributionSpec(
        "gaussian", p=2, covariance=np.eye(2), epsilon=0.1, q_spec=q
    )
    back = DistributionSpec.from_json(spec.to_json())
    assert back.family == spec.family
    assert back.epsilon == spec.epsilon
    np.testing.assert_array_equal(back.covariance, spec.covariance)
    np.testing.assert_array_equal(back.q_spec.location, q.location)

    plain = DistributionSpec("pareto", p=3, tail_beta=3.0)
    again = DistributionSpec.from_json(plain.to_json())
    assert again == plain

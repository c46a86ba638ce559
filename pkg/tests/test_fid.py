import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cardgan.errors import InvalidArgument, NumericFailure
from cardgan.evaluation import (
    FeatureStats,
    fit_stats,
    frechet_distance,
    load_stats,
    merge_stats,
    save_stats,
)


def gaussian_stats(mean, var):
    mean = np.atleast_1d(np.asarray(mean, dtype=np.float64))
    cov = np.diag(np.atleast_1d(np.asarray(var, dtype=np.float64)))
    return FeatureStats(mean=mean, cov=cov, n=2)


def diag_closed_form(mu_a, var_a, mu_b, var_b):
    mu_a, var_a = np.atleast_1d(mu_a), np.atleast_1d(var_a)
    mu_b, var_b = np.atleast_1d(mu_b), np.atleast_1d(var_b)
    return float(np.sum((mu_a - mu_b) ** 2) + np.sum((np.sqrt(var_a) - np.sqrt(var_b)) ** 2))


# -- fit_stats ---------------------------------------------------------------

def test_fit_stats_constant_features():
    stats = fit_stats(np.ones((5, 3)))
    np.testing.assert_allclose(stats.cov, 0.0, atol=1e-12)
    np.testing.assert_allclose(stats.mean, 1.0)


def test_fit_stats_two_points_hand_computed():
    stats = fit_stats(np.array([[0.0], [2.0]]))
    assert stats.mean[0] == pytest.approx(1.0)
    assert stats.cov[0, 0] == pytest.approx(2.0)  # unbiased
    assert stats.n == 2


def test_fit_stats_matches_two_pass_oracle():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((50, 4))
    stats = fit_stats(x)
    mean = x.mean(axis=0)
    cov = np.zeros((4, 4))
    for row in x:
        cov += np.outer(row - mean, row - mean)
    cov /= len(x) - 1
    np.testing.assert_allclose(stats.mean, mean, atol=1e-10)
    np.testing.assert_allclose(stats.cov, cov, atol=1e-10)


def test_fit_stats_needs_two_samples():
    with pytest.raises(InvalidArgument):
        fit_stats(np.ones((1, 3)))


def test_merge_stats_matches_joint_fit():
    rng = np.random.default_rng(1)
    x = rng.standard_normal((30, 3))
    merged = merge_stats(fit_stats(x[:12]), fit_stats(x[12:]))
    joint = fit_stats(x)
    np.testing.assert_allclose(merged.mean, joint.mean, atol=1e-10)
    np.testing.assert_allclose(merged.cov, joint.cov, atol=1e-10)
    assert merged.n == 30


# -- frechet_distance ----------------------------------------------------------

def test_identical_stats_exact_zero():
    stats = fit_stats(np.random.default_rng(2).standard_normal((20, 5)))
    assert frechet_distance(stats, stats) == 0.0


def test_scalar_closed_form():
    a = gaussian_stats(0.0, 1.0)
    b = gaussian_stats(1.0, 4.0)
    assert frechet_distance(a, b) == pytest.approx(2.0, abs=1e-10)


def test_diagonal_decomposes_into_scalars():
    rng = np.random.default_rng(3)
    mu_a, mu_b = rng.normal(size=6), rng.normal(size=6)
    var_a, var_b = rng.uniform(0.5, 2.0, 6), rng.uniform(0.5, 2.0, 6)
    d = frechet_distance(gaussian_stats(mu_a, var_a), gaussian_stats(mu_b, var_b))
    per_dim = sum(diag_closed_form(mu_a[i], var_a[i], mu_b[i], var_b[i]) for i in range(6))
    assert d == pytest.approx(per_dim, rel=1e-8)


def test_sampled_gaussians_converge_1d():
    rng = np.random.default_rng(4)
    a = fit_stats(rng.normal(0.0, 1.0, size=(10_000, 1)))
    b = fit_stats(rng.normal(1.0, 2.0, size=(10_000, 1)))
    assert frechet_distance(a, b) == pytest.approx(diag_closed_form(0, 1, 1, 4), rel=0.05)


def test_sampled_gaussians_converge_diag_8d():
    rng = np.random.default_rng(5)
    mu_a, mu_b = np.zeros(8), np.linspace(0.5, 1.5, 8)
    sd_a, sd_b = np.ones(8), np.linspace(0.8, 2.0, 8)
    a = fit_stats(rng.normal(mu_a, sd_a, size=(10_000, 8)))
    b = fit_stats(rng.normal(mu_b, sd_b, size=(10_000, 8)))
    expected = diag_closed_form(mu_a, sd_a**2, mu_b, sd_b**2)
    assert frechet_distance(a, b) == pytest.approx(expected, rel=0.05)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 1000), st.integers(0, 1000))
def test_symmetric_and_non_negative(seed_a, seed_b):
    a = fit_stats(np.random.default_rng(seed_a).standard_normal((30, 4)))
    b = fit_stats(np.random.default_rng(seed_b).standard_normal((30, 4)))
    d_ab = frechet_distance(a, b)
    d_ba = frechet_distance(b, a)
    assert d_ab >= 0.0
    assert d_ab == pytest.approx(d_ba, rel=1e-6, abs=1e-9)


def test_dimension_mismatch():
    a = fit_stats(np.random.default_rng(0).standard_normal((10, 3)))
    b = fit_stats(np.random.default_rng(0).standard_normal((10, 4)))
    with pytest.raises(InvalidArgument):
        frechet_distance(a, b)


def test_non_psd_beyond_tolerance_reports_eigenvalue():
    bad = np.array([[1.0, 0.0], [0.0, -0.5]])
    with pytest.raises(NumericFailure, match="eigenvalue"):
        FeatureStats(mean=np.zeros(2), cov=bad, n=3)


def test_small_negative_eigenvalues_tolerated():
    cov = np.array([[1.0, 0.0], [0.0, -5e-7]])
    stats = FeatureStats(mean=np.zeros(2), cov=cov, n=3)
    other = gaussian_stats(np.zeros(2), np.ones(2))
    assert np.isfinite(frechet_distance(stats, other))


def test_stats_round_trip(tmp_path):
    stats = fit_stats(np.random.default_rng(6).standard_normal((40, 5)))
    path = save_stats(tmp_path / "s.stats", stats, "random-projection")
    loaded, extractor = load_stats(path)
    assert extractor == "random-projection"
    assert loaded.n == 40
    np.testing.assert_allclose(loaded.mean, stats.mean, atol=1e-6)
    assert frechet_distance(loaded, stats) < 1e-8

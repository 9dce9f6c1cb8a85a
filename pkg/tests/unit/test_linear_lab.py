import numpy as np
import pytest

from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError, SingularSystemError
from helpers.app_logic_helpers.dataset_helper import default_prior, generate_dataset
from helpers.app_logic_helpers.evaluation_helper import build_test_set
from helpers.app_logic_helpers.linear_lab_helper import (
    affine_objective,
    asymptotic_affine,
    convergence_test_signals,
    estimator_gap_mse,
    fit_affine,
    fit_streaming,
    gaussian_posterior_mean,
    prior_moments,
    run_convergence_study,
)
from models.affine_estimator import AffineEstimator, PriorMoments
from models.model_spec import FirModelSpec
from models.prior_spec import PriorSpec, UniformPrior

PHI = np.array([[1.0, 0.0], [2.0, 1.0], [3.0, 2.0]])
MOMENTS = PriorMoments([1.0, 1.0], np.eye(2) / 3.0, 0.09)


@pytest.fixture
def fir_spec():
    return FirModelSpec({"order": 2, "noise_std": 0.3, "input": {"kind": "uniform01", "length": 10, "seed": 2}})


class TestAsymptoticAffine:

    def test_dense_inverse_oracle(self):
        limit = asymptotic_affine(PHI, MOMENTS)
        R = MOMENTS.R_theta
        expected_A = R @ PHI.T @ np.linalg.inv(PHI @ R @ PHI.T + 0.09 * np.eye(3))
        expected_b = (np.eye(2) - expected_A @ PHI) @ MOMENTS.mu_theta
        np.testing.assert_allclose(limit.A, expected_A, atol=1e-12)
        np.testing.assert_allclose(limit.b, expected_b, atol=1e-12)

    def test_matches_gaussian_posterior_mean(self):
        limit = asymptotic_affine(PHI, MOMENTS)
        rng = np.random.default_rng(0)
        for y in rng.normal(size=(5, 3)):
            np.testing.assert_allclose(limit(y), gaussian_posterior_mean(PHI, MOMENTS, y), atol=1e-10)

    def test_collapsed_prior_returns_its_mean(self):
        moments = PriorMoments([0.4, -0.2], np.zeros((2, 2)), 0.09)
        limit = asymptotic_affine(PHI, moments)
        np.testing.assert_array_equal(limit.A, np.zeros((2, 3)))
        np.testing.assert_allclose(limit.b, [0.4, -0.2])

    def test_noiseless_identity(self):
        moments = PriorMoments([1.0, 2.0], np.eye(2), 1e-12)
        limit = asymptotic_affine(np.eye(2), moments)
        np.testing.assert_allclose(limit.A, np.eye(2), atol=1e-9)
        np.testing.assert_allclose(limit.b, [0.0, 0.0], atol=1e-9)

    def test_zero_noise_on_rank_deficient_system(self):
        with pytest.raises(SingularSystemError):
            asymptotic_affine(PHI, PriorMoments([1.0, 1.0], np.eye(2), 0.0))

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidSpecError):
            asymptotic_affine(np.ones((3, 3)), MOMENTS)


class TestFitAffine:

    def test_too_few_records(self, fir_spec):
        dataset = generate_dataset(fir_spec, default_prior(fir_spec), P=2, M=3, seed=0)
        with pytest.raises(SingularSystemError, match="rank"):
            fit_affine(dataset)

    def test_streaming_fit_matches_stacked_fit(self, fir_spec):
        prior = default_prior(fir_spec)
        dataset = generate_dataset(fir_spec, prior, P=40, M=5, seed=3)
        stacked = fit_affine(dataset)
        streamed = fit_streaming(fir_spec, prior, P=40, M=5, seed=3)
        np.testing.assert_allclose(streamed.A, stacked.A, atol=1e-7)
        np.testing.assert_allclose(streamed.b, stacked.b, atol=1e-7)

    def test_fit_minimises_objective(self, fir_spec):
        dataset = generate_dataset(fir_spec, default_prior(fir_spec), P=30, M=4, seed=8)
        fitted = fit_affine(dataset)
        best = affine_objective(fitted, dataset.signals(), dataset.thetas())
        nudged = AffineEstimator(fitted.A, fitted.b + 1e-3)
        assert best < affine_objective(nudged, dataset.signals(), dataset.thetas())


class TestEstimatorGap:

    def test_identical_estimators(self):
        limit = asymptotic_affine(PHI, MOMENTS)
        assert estimator_gap_mse(limit, limit, [np.ones(3), np.arange(3.0)]) == 0.0

    def test_constant_gap(self):
        estimator = AffineEstimator(np.zeros((2, 3)), [1e-3, 0.0])
        limit = AffineEstimator(np.zeros((2, 3)), [0.0, 0.0])
        assert estimator_gap_mse(estimator, limit, [np.ones(3)]) == pytest.approx(1e-6, rel=1e-12)

    def test_needs_signals(self):
        limit = asymptotic_affine(PHI, MOMENTS)
        with pytest.raises(InvalidSpecError):
            estimator_gap_mse(limit, limit, [])


class TestConvergenceStudy:

    def test_gap_shrinks_with_more_records(self, fir_spec):
        table = run_convergence_study(fir_spec, default_prior(fir_spec), [20, 400], [5], seeds=[0, 1], n_test=20)
        assert list(table.index) == [20, 400]
        assert list(table.columns) == [5]
        assert table.loc[400, 5] < table.loc[20, 5]

    def test_test_signals_sit_at_theta_0(self, fir_spec):
        thetas, signals = convergence_test_signals(fir_spec, default_prior(fir_spec), n_test=15, test_seed=4)
        assert signals.shape == (15, 10)
        np.testing.assert_array_equal(thetas, np.tile([0.7, 0.7], (15, 1)))
        np.testing.assert_array_equal(signals, build_test_set(fir_spec, K=15, seed=4).signals)

    def test_explicit_theta_0(self, fir_spec):
        thetas, _ = convergence_test_signals(fir_spec, default_prior(fir_spec), 5, 0, theta_0=[0.2, 0.4])
        assert np.all(thetas == [0.2, 0.4])

    def test_prior_draws_on_request(self, fir_spec):
        thetas, signals = convergence_test_signals(fir_spec, default_prior(fir_spec), 5, 0, test_draw="prior")
        assert signals.shape == (5, 10)
        assert len({tuple(row) for row in thetas}) == 5

    def test_unknown_test_draw(self, fir_spec):
        with pytest.raises(InvalidSpecError, match="test_draw"):
            convergence_test_signals(fir_spec, default_prior(fir_spec), 5, 0, test_draw="posterior")

    def test_needs_gaussian_prior(self, fir_spec):
        box = PriorSpec([UniformPrior(0.0, 1.0), UniformPrior(0.0, 1.0)])
        with pytest.raises(InvalidSpecError):
            prior_moments(box, 0.09)

    @pytest.mark.slow
    def test_large_grid_reaches_small_gap(self):
        spec = FirModelSpec({})
        table = run_convergence_study(spec, default_prior(spec), [1000], [500], seeds=[0])
        assert table.loc[1000, 500] < 1e-4

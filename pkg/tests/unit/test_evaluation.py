import numpy as np
import pytest

from exceptions.deepbayes_exceptions.exceptions import EstimatorFailureError, InvalidSpecError
from helpers.app_logic_helpers import evaluation_helper
from helpers.app_logic_helpers.dataset_helper import default_prior
from helpers.app_logic_helpers.mh_helper import cme_estimator, estimate_signal_cme
from models.evaluation import EvalReport, TestSet
from models.filter_config import PfConfig
from models.model_spec import FirModelSpec, GrowthModelSpec
from models.prior_spec import PriorSpec, UniformPrior
from models.theta_vector import ThetaVector


@pytest.fixture
def fir_spec():
    return FirModelSpec({"order": 2, "input": {"kind": "uniform01", "length": 8, "seed": 0}})


@pytest.fixture
def fir_test(fir_spec):
    return evaluation_helper.build_test_set(fir_spec, K=5, seed=2)


class TestBuildTestSet:

    def test_default_theta_0(self, fir_test):
        assert fir_test.theta_0.tolist() == [0.7, 0.7]
        assert fir_test.signals.shape == (5, 8)

    def test_growth_default_theta_0(self):
        test = evaluation_helper.build_test_set(GrowthModelSpec({"variant": "M2", "length": 6}), K=2)
        assert test.theta_0.tolist() == [0.7, 1.0, 0.1, 0.1]

    def test_same_seed_same_signals(self, fir_spec, fir_test):
        again = evaluation_helper.build_test_set(fir_spec, K=5, seed=2)
        np.testing.assert_array_equal(again.signals, fir_test.signals)
        assert again.fingerprint == fir_test.fingerprint

    def test_fingerprint_tracks_seed(self, fir_spec, fir_test):
        other = evaluation_helper.build_test_set(fir_spec, K=5, seed=3)
        assert other.fingerprint != fir_test.fingerprint

    def test_non_positive_K(self, fir_spec):
        with pytest.raises(InvalidSpecError):
            evaluation_helper.build_test_set(fir_spec, K=0)

    def test_variance_component_must_be_positive(self):
        with pytest.raises(InvalidSpecError):
            evaluation_helper.build_test_set(GrowthModelSpec({"variant": "M1", "length": 6}), theta_0=[1.0, 0.0])


class TestMse:

    def test_perfect_estimator(self, fir_test):
        assert evaluation_helper.test_mse(lambda y: np.array([0.7, 0.7]), fir_test) == 0.0

    def test_constant_offset(self, fir_test):
        mse = evaluation_helper.test_mse(lambda y: np.array([0.8, 0.7]), fir_test)
        assert mse == pytest.approx(0.01, abs=1e-15)

    def test_average_over_signals(self, fir_spec):
        test = TestSet(ThetaVector([0.0, 0.0]), np.array([np.zeros(8), np.ones(8)]), fir_spec, seed=0)

        def estimator(y):
            return np.array([np.sqrt(0.02) if y[0] == 0.0 else np.sqrt(0.04), 0.0])

        assert evaluation_helper.test_mse(estimator, test) == pytest.approx(0.03)

    def test_threads_do_not_change_result(self, fir_test):
        def estimator(y):
            return np.array([y.mean(), y.std()])

        serial = evaluation_helper.squared_errors(estimator, fir_test, threads=1)
        threaded = evaluation_helper.squared_errors(estimator, fir_test, threads=3)
        np.testing.assert_array_equal(serial, threaded)

    def test_failure_reports_signal_index(self, fir_test):
        calls = []

        def estimator(y):
            calls.append(1)
            if len(calls) == 3:
                raise RuntimeError("solver did not converge")
            return np.array([0.7, 0.7])

        with pytest.raises(EstimatorFailureError) as error:
            evaluation_helper.test_mse(estimator, fir_test)
        assert error.value.index == 2

    def test_wrong_shape_is_a_failure(self, fir_test):
        with pytest.raises(EstimatorFailureError) as error:
            evaluation_helper.test_mse(lambda y: np.array([0.7]), fir_test)
        assert error.value.index == 0


class TestBaselines:

    def test_prior_mean(self):
        estimator = evaluation_helper.prior_mean_baseline(PriorSpec([UniformPrior(0.1, 1.5)]))
        np.testing.assert_allclose(estimator(np.zeros(4)), [0.8])

    def test_fir_prior_mean(self, fir_spec, fir_test):
        estimator = evaluation_helper.prior_mean_baseline(default_prior(fir_spec))
        # ‖[0.7, 0.7] − [1, 1]‖² on every signal
        assert evaluation_helper.test_mse(estimator, fir_test) == pytest.approx(0.18)

    def test_timing_report(self, fir_test):
        report = evaluation_helper.timing_report(
            "prior_mean", lambda y: np.array([1.0, 1.0]), fir_test, training_seconds=2.5, config={"seed": 0}
        )
        assert isinstance(report, EvalReport)
        assert report.test_mse == pytest.approx(0.18)
        assert report.inference_seconds >= 0.0
        assert report.test_fingerprint == fir_test.fingerprint
        assert report.n_signals == 5

        frame = evaluation_helper.reports_frame([report])
        assert list(frame.columns) == evaluation_helper.REPORT_COLUMNS
        assert frame.loc[0, "training_seconds"] == 2.5


class TestMhEstimator:

    @pytest.fixture
    def growth(self):
        spec = GrowthModelSpec({"variant": "M1", "length": 15})
        test = evaluation_helper.build_test_set(spec, K=2, seed=1)
        return spec, default_prior(spec), test

    def test_estimate_stays_in_the_box(self, growth):
        spec, prior, test = growth
        theta_hat, chains = estimate_signal_cme(
            spec, prior, test.signals[0], PfConfig({"n_particles": 30}), seed=0,
            n_chains=2, T_burn_in=20, T_reqd=60, tune=False,
        )
        assert len(chains) == 2
        assert prior.contains(theta_hat)
        np.testing.assert_allclose(theta_hat, np.mean([chain.estimate() for chain in chains], axis=0))

    def test_estimator_is_keyed_by_signal(self, growth):
        spec, prior, test = growth
        estimator = cme_estimator(spec, prior, PfConfig({"n_particles": 20}), seed=4,
                                  T_burn_in=5, T_reqd=20, tune=False)
        first = estimator(test.signals[1])
        estimator(test.signals[0])
        np.testing.assert_array_equal(estimator(test.signals[1]), first)

    def test_needs_bounded_prior(self, growth):
        spec, _, test = growth
        from models.prior_spec import GaussianPrior

        unbounded = PriorSpec([GaussianPrior([1.0, 0.1], np.eye(2))])
        with pytest.raises(InvalidSpecError):
            estimate_signal_cme(spec, unbounded, test.signals[0], PfConfig(), seed=0)

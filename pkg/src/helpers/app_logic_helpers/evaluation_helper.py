"""
Test sets at a fixed true θ0, the Monte Carlo test MSE and timing reports that compare
estimators on the same test set.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from config.defaults import K_TEST
from config.model_constants import FIR_TRUE_THETA, GROWTH_TRUE_THETA
from exceptions.deepbayes_exceptions.exceptions import EstimatorFailureError, InvalidSpecError
from helpers.app_logic_helpers.dataset_helper import simulate
from helpers.app_logic_helpers.simulation_helper import generate_input
from helpers.common_helper.common_helper import Timed, fingerprint
from helpers.common_helper.logger_helper import LoggerHelper
from helpers.common_helper.rng_helper import STREAM_TEST, derive_seed
from models.evaluation import EvalReport, TestSet
from models.model_spec import FirModelSpec, GrowthModelSpec
from models.prior_spec import PriorSpec
from models.theta_vector import ThetaVector

logger = LoggerHelper(__name__).get_logger()

Estimator = Callable[[np.ndarray], np.ndarray]

REPORT_COLUMNS = [
    "method", "test_mse", "training_seconds", "inference_seconds", "config_fingerprint", "test_fingerprint", "n_signals",
]


def default_theta_0(model_spec) -> np.ndarray:
    if isinstance(model_spec, GrowthModelSpec) and model_spec.variant in GROWTH_TRUE_THETA:
        return np.array(GROWTH_TRUE_THETA[model_spec.variant], dtype=np.float64)
    if isinstance(model_spec, FirModelSpec) and model_spec.order == len(FIR_TRUE_THETA):
        return np.array(FIR_TRUE_THETA, dtype=np.float64)
    raise InvalidSpecError(f"no default theta_0 for {model_spec.family} model; pass one explicitly")


def build_test_set(model_spec, theta_0=None, K: int = K_TEST, seed: int = 0) -> TestSet:
    if not isinstance(K, (int, np.integer)) or K < 1:
        raise InvalidSpecError(f"K_test must be a positive integer, got {K!r}")
    values = default_theta_0(model_spec) if theta_0 is None else np.asarray(theta_0, dtype=np.float64).reshape(-1)
    theta = ThetaVector(values, model_spec.variance_mask)
    u = generate_input(model_spec.input)
    signals = np.stack([simulate(model_spec, theta, derive_seed(seed, STREAM_TEST, k), u=u) for k in range(int(K))])
    logger.info("Built test set of %d signals at theta_0=%s", K, values.tolist())
    return TestSet(theta, signals, model_spec, seed)


def squared_errors(estimator: Estimator, test: TestSet, threads: int = 1) -> np.ndarray:
    """‖θ0 − θ̂(y_κ)‖² for every test signal κ."""
    theta_0 = test.theta_0.values

    def score(kappa: int) -> float:
        try:
            theta_hat = np.asarray(estimator(test.signals[kappa]), dtype=np.float64).reshape(-1)
        except Exception as e:
            raise EstimatorFailureError(f"estimator failed on test signal {kappa}: {e}", index=kappa) from e
        if theta_hat.shape != theta_0.shape or not np.all(np.isfinite(theta_hat)):
            raise EstimatorFailureError(
                f"estimator returned {theta_hat.tolist()} on test signal {kappa}", index=kappa
            )
        residual = theta_0 - theta_hat
        return float(residual @ residual)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return np.array(list(executor.map(score, range(len(test)))))
    return np.array([score(kappa) for kappa in range(len(test))])


def test_mse(estimator: Estimator, test: TestSet, threads: int = 1) -> float:
    return float(squared_errors(estimator, test, threads).mean())


# keep pytest from collecting the metric as a test
test_mse.__test__ = False


def prior_mean_baseline(prior: PriorSpec) -> Estimator:
    mean = prior.mean()
    if not np.all(np.isfinite(mean)):
        raise InvalidSpecError(f"prior mean is not finite: {mean.tolist()}")

    def estimator(_y) -> np.ndarray:
        return mean.copy()

    return estimator


def timing_report(method: str, estimator: Estimator, test: TestSet, training_seconds: float = 0.0,
                  config: Optional[Dict[str, Any]] = None, threads: int = 1) -> EvalReport:
    """Test MSE plus the total wall-clock inference time over the whole test set."""
    timed_mse = Timed(f"{method} inference")(test_mse)
    mse = timed_mse(estimator, test, threads)
    report = EvalReport(
        method=method,
        test_mse=mse,
        training_seconds=training_seconds,
        inference_seconds=timed_mse.last_seconds,
        config_fingerprint=fingerprint(config) if config is not None else None,
        test_fingerprint=test.fingerprint,
        n_signals=len(test),
    )
    logger.info("%s: test MSE %.6g, inference %.3g s over %d signals", method, mse, report.inference_seconds, len(test))
    return report


def reports_frame(reports: Sequence[EvalReport]) -> pd.DataFrame:
    rows: List[Dict[str, Any]] = [report.to_dict() for report in reports]
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)

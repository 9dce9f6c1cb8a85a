from typing import Any, Dict, List

from command_processors.base_processor import BaseProcessor
from command_registry.processor_registry import CommandRegistry
from config.defaults import K_TEST
from exceptions.deepbayes_exceptions.exceptions import ConfigError
from helpers.app_logic_helpers.evaluation_helper import (
    build_test_set,
    prior_mean_baseline,
    reports_frame,
    timing_report,
)
from helpers.app_logic_helpers.mh_helper import cme_estimator
from helpers.common_helper.logger_helper import LoggerHelper
from helpers.storage_helpers.checkpoint_store_helper import read_checkpoint
from models.model_spec import GrowthModelSpec
from models.run_context import RunContext

logger = LoggerHelper(__name__).get_logger()

REPORT_FILE = "eval_report.csv"

METHOD_RNN = "rnn"
METHOD_PRIOR_MEAN = "prior_mean"
METHOD_MH = "mh"
# returns θ0 itself; checks the metric plumbing
METHOD_ORACLE = "oracle"
VALID_METHODS = (METHOD_RNN, METHOD_PRIOR_MEAN, METHOD_MH, METHOD_ORACLE)


@CommandRegistry.register("evaluation")
class EvaluationProcessor(BaseProcessor):
    def __init__(self):
        super().__init__({
            "evaluate": self._evaluate,
        })

    def _methods(self, run: RunContext) -> List[str]:
        paths = run.section("paths")
        default = [METHOD_RNN, METHOD_PRIOR_MEAN] if "checkpoint" in paths else [METHOD_PRIOR_MEAN]
        methods = run.section("test").get("methods", default)
        if not isinstance(methods, list) or not methods:
            raise ConfigError("test.methods must be a non-empty list", key="test.methods")
        unknown = [method for method in methods if method not in VALID_METHODS]
        if unknown:
            raise ConfigError(f"unknown methods {unknown}; expected some of {list(VALID_METHODS)}", key="test.methods")
        if METHOD_RNN in methods and "checkpoint" not in paths:
            raise ConfigError("method rnn needs paths.checkpoint", key="paths.checkpoint")
        return methods

    def _evaluate(self, run: RunContext) -> Dict[str, Any]:
        """
        Test MSE and inference time of each requested method on one shared test set.

        Required config: model.family
        Optional config: prior, test.K, test.theta_0, test.seed, test.methods, paths.checkpoint, mh, pf
        """
        model_spec = self.model_spec(run)
        prior = self.prior(run, model_spec)
        methods = self._methods(run)
        if METHOD_MH in methods and not isinstance(model_spec, GrowthModelSpec):
            raise ConfigError("method mh needs a growth model", key="test.methods")
        section = run.section("test")
        K = section.get("K", K_TEST)
        seed = section.get("seed", run.seed)
        pf_cfg = self.pf_config(run) if METHOD_MH in methods else None
        mh_options = self.mh_options(run, model_spec.theta_dim) if METHOD_MH in methods else None

        test = self.build("test", lambda: build_test_set(model_spec, section.get("theta_0"), K, seed))
        run.resolve("test", {"K": len(test), "theta_0": test.theta_0.tolist(), "seed": seed, "methods": methods})

        reports = []
        for method in methods:
            training_seconds = 0.0
            if method == METHOD_RNN:
                path = run.section("paths")["checkpoint"]
                checkpoint = read_checkpoint(path)
                estimator = checkpoint.estimator
                training_seconds = checkpoint.training_seconds
            elif method == METHOD_PRIOR_MEAN:
                estimator = prior_mean_baseline(prior)
            elif method == METHOD_ORACLE:
                theta_0 = test.theta_0.values.copy()
                estimator = lambda _y: theta_0
            else:
                mh_seed = run.section("mh").get("seed", run.seed)
                estimator = cme_estimator(model_spec, prior, pf_cfg, mh_seed, **mh_options)
            reports.append(timing_report(method, estimator, test, training_seconds, run.resolved, run.threads))

        frame = reports_frame(reports)
        run.staged.write_csv(REPORT_FILE, frame)
        best = frame.loc[frame["test_mse"].idxmin()]
        return {
            "signals": len(test),
            "methods": ",".join(methods),
            "best": best["method"],
            "best_mse": f"{best['test_mse']:.6g}",
        }

from typing import Any, Dict

import numpy as np
import pandas as pd

from command_processors.base_processor import BaseProcessor
from command_registry.processor_registry import CommandRegistry
from exceptions.deepbayes_exceptions.exceptions import ConfigError
from helpers.app_logic_helpers.evaluation_helper import build_test_set
from helpers.app_logic_helpers.mh_helper import chain_frame, estimate_signal_cme
from helpers.common_helper.logger_helper import LoggerHelper
from helpers.common_helper.rng_helper import STREAM_MH, derive_seed
from models.mh_config import MhConfig
from models.model_spec import GrowthModelSpec
from models.run_context import RunContext

logger = LoggerHelper(__name__).get_logger()

ESTIMATES_FILE = "cme_estimates.csv"


@CommandRegistry.register("mcmc")
class McmcProcessor(BaseProcessor):
    def __init__(self):
        super().__init__({
            "run_chains": self._run_chains,
        })

    def _run_chains(self, run: RunContext) -> Dict[str, Any]:
        """
        CME estimates for the first K test signals at theta_0, with one chain dump per chain.

        Required config: model.family (growth)
        Optional config: prior (bounded), test.K (default 1), test.theta_0, test.seed, mh, pf
        """
        model_spec = self.model_spec(run)
        if not isinstance(model_spec, GrowthModelSpec):
            raise ConfigError("mh runs need a growth model", key="model.family")
        prior = self.prior(run, model_spec)
        bounds = prior.bounds()
        if bounds is None:
            raise ConfigError("mh runs need a uniform prior on every component", key="prior")
        pf_cfg = self.pf_config(run)
        options = self.mh_options(run, model_spec.theta_dim)
        # catches bad chain settings before any filtering starts
        self.build("mh", lambda: MhConfig(bounds, **{
            key: options[key] for key in ("theta_init", "proposal_cov", "T_burn_in", "T_reqd") if key in options
        }))
        mh_seed = run.section("mh").get("seed", run.seed)

        section = run.section("test")
        seed = section.get("seed", run.seed)
        test = self.build("test", lambda: build_test_set(model_spec, section.get("theta_0"), section.get("K", 1), seed))
        run.resolve("test", {"K": len(test), "theta_0": test.theta_0.tolist(), "seed": seed})

        rows = []
        for kappa, y in enumerate(test.signals):
            theta_hat, chains = estimate_signal_cme(
                model_spec, prior, y, pf_cfg, derive_seed(mh_seed, STREAM_MH, kappa), progress=run.progress, **options
            )
            for index, chain in enumerate(chains):
                run.staged.write_csv(f"chain_{kappa}_{index}.csv", chain_frame(chain))
            row = {"signal": kappa}
            row.update({f"theta_hat_{i + 1}": value for i, value in enumerate(theta_hat)})
            row["acceptance"] = float(np.mean([chain.acceptance_rate for chain in chains]))
            row["failures"] = int(sum(chain.failures for chain in chains))
            row["squared_error"] = float(np.sum((theta_hat - test.theta_0.values) ** 2))
            rows.append(row)
            logger.info("signal %d: theta_hat=%s acceptance=%.3f", kappa, theta_hat.tolist(), row["acceptance"])

        estimates = pd.DataFrame(rows)
        run.staged.write_csv(ESTIMATES_FILE, estimates)
        return {
            "signals": len(test),
            "chains": options["n_chains"],
            "acceptance": f"{estimates['acceptance'].mean():.3f}",
            "test_mse": f"{estimates['squared_error'].mean():.6g}",
        }

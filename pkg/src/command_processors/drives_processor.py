from typing import Any, Dict

import numpy as np
import pandas as pd

from command_processors.base_processor import BaseProcessor
from command_registry.processor_registry import CommandRegistry
from config.defaults import N_STARTS, NELDER_MEAD_MAX_ITER
from config.model_constants import DRIVES_INPUT_HOLD, DRIVES_PRBS_AMPLITUDE, DRIVES_SAMPLING_PERIOD
from helpers.app_logic_helpers.drives_helper import (
    build_drives_prior,
    fit_lsq,
    read_measurement_csv,
    reconstruct_prbs,
    signal_table,
    x1_path,
)
from helpers.common_helper.logger_helper import LoggerHelper
from models.run_context import RunContext

logger = LoggerHelper(__name__).get_logger()

FIT_FILE = "drives_fit.json"
STARTS_FILE = "drives_starts.csv"
SIGNALS_FILE = "drives_signals.csv"
PRIOR_FILE = "drives_prior.json"


@CommandRegistry.register("drives")
class DrivesProcessor(BaseProcessor):
    def __init__(self):
        super().__init__({
            "fit": self._fit,
        })

    def _fit(self, run: RunContext) -> Dict[str, Any]:
        """
        Fit the Wiener model to a measured signal and derive the prior for a synthetic drives set.

        Required config: paths.measurements, drives.init_box (4 intervals for K, alpha, omega0, xi)
        Optional config: drives.n_starts, drives.seed, drives.max_iter, drives.amplitude, drives.hold,
                         drives.input_seed, drives.dt
        """
        section = run.section("drives")
        settings = {
            "init_box": section["init_box"],
            "n_starts": section.get("n_starts", N_STARTS),
            "seed": section.get("seed", run.seed),
            "max_iter": section.get("max_iter", NELDER_MEAD_MAX_ITER),
            "amplitude": section.get("amplitude", DRIVES_PRBS_AMPLITUDE),
            "hold": section.get("hold", DRIVES_INPUT_HOLD),
            "input_seed": section.get("input_seed", run.seed),
            "dt": section.get("dt", DRIVES_SAMPLING_PERIOD),
        }
        run.resolve("drives", settings)

        time_s, y_meas = read_measurement_csv(run.section("paths")["measurements"])
        u = self.build("drives", lambda: reconstruct_prbs(
            y_meas.size, settings["amplitude"], settings["hold"], settings["input_seed"]
        ))
        fit = self.build("drives", lambda: fit_lsq(
            y_meas, u, settings["dt"], settings["init_box"], settings["n_starts"], settings["seed"], settings["max_iter"]
        ))

        y_sim = np.abs(x1_path(fit.theta_prime, u, settings["dt"]))
        starts = pd.DataFrame(fit.start_points, columns=["K", "alpha", "omega0", "xi"])
        starts.insert(0, "start", np.arange(len(starts)))
        starts["objective"] = fit.start_objectives

        run.staged.write_json(FIT_FILE, {**fit.to_dict(), "dt": settings["dt"]})
        run.staged.write_csv(STARTS_FILE, starts)
        run.staged.write_csv(SIGNALS_FILE, signal_table(time_s, y_meas, y_sim))
        run.staged.write_json(PRIOR_FILE, build_drives_prior(fit.theta_prime).to_dict())
        return {
            "samples": int(y_meas.size),
            "residual_norm": f"{fit.residual_norm:.6g}",
            "best_start": fit.best_start,
        }

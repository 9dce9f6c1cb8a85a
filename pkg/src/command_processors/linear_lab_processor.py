from typing import Any, Dict

from command_processors.base_processor import BaseProcessor
from command_registry.processor_registry import CommandRegistry
from exceptions.deepbayes_exceptions.exceptions import ConfigError
from helpers.app_logic_helpers.linear_lab_helper import TEST_DRAW_THETA_0, TEST_DRAWS, run_convergence_study
from helpers.common_helper.logger_helper import LoggerHelper
from models.model_spec import FirModelSpec
from models.run_context import RunContext

logger = LoggerHelper(__name__).get_logger()

CONVERGENCE_FILE = "convergence.csv"


@CommandRegistry.register("linear_lab")
class LinearLabProcessor(BaseProcessor):
    def __init__(self):
        super().__init__({
            "convergence": self._convergence,
        })

    def _convergence(self, run: RunContext) -> Dict[str, Any]:
        """
        Seed-averaged gap between fitted and asymptotic affine estimators on a P x M grid.

        Required config: model (fir), linear_lab.P_values, linear_lab.M_values, linear_lab.seeds
        Optional config: prior (single Gaussian component), linear_lab.n_test, linear_lab.test_seed,
        linear_lab.test_draw ("theta_0" or "prior"), linear_lab.theta_0
        """
        model_spec = self.model_spec(run)
        if not isinstance(model_spec, FirModelSpec):
            raise ConfigError("linear-lab needs a fir model", key="model.family")
        prior = self.prior(run, model_spec)
        section = run.section("linear_lab")
        for key in ("P_values", "M_values", "seeds"):
            if not isinstance(section[key], list) or not section[key]:
                raise ConfigError(f"linear_lab.{key} must be a non-empty list", key=f"linear_lab.{key}")
        test_draw = section.get("test_draw", TEST_DRAW_THETA_0)
        if test_draw not in TEST_DRAWS:
            raise ConfigError(f"linear_lab.test_draw must be one of {TEST_DRAWS}", key="linear_lab.test_draw")
        run.resolve("linear_lab", {**section, "n_test": section.get("n_test", 100), "test_draw": test_draw})

        table = self.build("linear_lab", lambda: run_convergence_study(
            model_spec, prior, section["P_values"], section["M_values"], section["seeds"],
            n_test=section.get("n_test", 100), test_seed=section.get("test_seed"), progress=run.progress,
            test_draw=test_draw, theta_0=section.get("theta_0"),
        ))
        run.staged.write_csv(CONVERGENCE_FILE, table, index=True)
        largest = table.iloc[-1, -1]
        smallest = table.iloc[0, 0]
        return {
            "cells": int(table.size),
            "gap_smallest": f"{smallest:.3e}",
            "gap_largest": f"{largest:.3e}",
        }

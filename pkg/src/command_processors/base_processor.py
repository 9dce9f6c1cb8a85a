"""
Base class for all command processors.
Handles dispatching actions to appropriate processor methods using an action map, and turns
config sections into domain objects so a bad section fails before any work is done.
"""

import traceback
from typing import Any, Callable, Dict, Optional

import numpy as np

from exceptions.deepbayes_exceptions.exceptions import ConfigError, InvalidSpecError
from helpers.app_logic_helpers.dataset_helper import default_prior
from helpers.common_helper.logger_helper import LoggerHelper
from models.filter_config import PfConfig
from models.model_spec import model_spec_from_dict
from models.prior_spec import PriorSpec
from models.run_context import RunContext

logger = LoggerHelper(__name__).get_logger()


class BaseProcessor:
    def __init__(self, action_map: Dict[str, Callable]):
        self.action_map = action_map
        logger.debug("Initialized %s with actions: %s", type(self).__name__, list(action_map.keys()))

    def process(self, action: str, run: RunContext) -> Dict[str, Any]:
        logger.info("Processing action: %s for command %s", action, run.command)

        try:
            if action not in self.action_map:
                logger.error("Unsupported action: %s", action)
                raise ValueError(f"Unsupported action: {action}")

            logger.debug("Dispatching action: %s", action)
            return self.action_map[action](run)

        except Exception as e:
            logger.error("Error while processing action: %s", str(e))
            logger.debug("Traceback:\n%s", traceback.format_exc())
            raise

    @staticmethod
    def build(section: str, builder: Callable[[], Any]) -> Any:
        """Run a builder for one config section; invalid values surface as ConfigError naming the section."""
        try:
            return builder()
        except (InvalidSpecError, KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"invalid {section} section: {e}", key=section) from e

    def model_spec(self, run: RunContext):
        spec = self.build("model", lambda: model_spec_from_dict(run.section("model")))
        run.resolve("model", spec.to_dict())
        return spec

    def prior(self, run: RunContext, model_spec) -> PriorSpec:
        section = run.section("prior")

        def make() -> PriorSpec:
            if "components" in section:
                return PriorSpec.from_dict(section)
            if "box" in section:
                return PriorSpec.uniform_box(section["box"], section.get("positive", model_spec.variance_mask))
            return default_prior(model_spec)

        prior = self.build("prior", make)
        if prior.dim != model_spec.theta_dim:
            raise ConfigError(f"prior has {prior.dim} components, model expects {model_spec.theta_dim}", key="prior")
        run.resolve("prior", prior.to_dict())
        return prior

    def pf_config(self, run: RunContext) -> PfConfig:
        section = run.section("pf")
        section.setdefault("seed", run.seed)
        cfg = self.build("pf", lambda: PfConfig(section))
        run.resolve("pf", cfg.to_dict())
        return cfg

    def mh_options(self, run: RunContext, d: int) -> Dict[str, Any]:
        """Keyword options for estimate_signal_cme taken from the mh section."""
        section = run.section("mh")
        options: Dict[str, Any] = {
            "n_chains": section.get("n_chains", 1),
            "tune": bool(section.get("tune", True)),
            "recompute_current": bool(section.get("recompute_current", False)),
        }
        for key in ("T_burn_in", "T_reqd", "theta_init"):
            if key in section:
                options[key] = section[key]
        proposal_std: Optional[float] = section.get("proposal_std")
        if proposal_std is not None:
            std = self.build("mh", lambda: np.broadcast_to(np.asarray(proposal_std, dtype=np.float64), (d,)))
            options["proposal_cov"] = np.diag(std ** 2)
        if not isinstance(options["n_chains"], int) or options["n_chains"] < 1:
            raise ConfigError(f"n_chains must be a positive integer, got {options['n_chains']!r}", key="mh.n_chains")
        run.resolve("mh", {**section, **{k: v for k, v in options.items() if k != "proposal_cov"},
                           "seed": section.get("seed", run.seed)})
        return options

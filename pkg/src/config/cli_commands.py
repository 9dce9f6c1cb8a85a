"""
Command table for the deepbayes command line.
Every subcommand names the processor and action that run it and the config sections it accepts.
Section keys are listed once below; a run config may only use keys listed here.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_NUMERICAL = 4
EXIT_UNEXPECTED = 5

# Keys allowed at the top level of every run config, next to the sections
TOP_LEVEL_KEYS = ("seed", "threads")

SECTION_KEYS: Dict[str, Tuple[str, ...]] = {
    "model": ("family", "variant", "length", "fixed", "free", "input", "order", "noise_std", "dt"),
    "prior": ("components", "box", "positive"),
    "dataset": ("P", "M", "seed"),
    "split": ("ratio", "seed"),
    "rnn": ("cell", "n_l", "n_H", "n_z", "input_dim"),
    "train": ("eta0", "epochs", "batch_size", "decay_factor", "patience", "tolerance", "seed", "clip_norm",
              "beta1", "beta2", "epsilon", "early_stopping"),
    "grid": ("cell", "layers", "hidden", "dense"),
    "test": ("K", "theta_0", "seed", "methods"),
    "mh": ("T_burn_in", "T_reqd", "theta_init", "proposal_std", "n_chains", "tune", "recompute_current", "seed"),
    "pf": ("n_particles", "seed"),
    "linear_lab": ("P_values", "M_values", "seeds", "n_test", "test_seed", "test_draw", "theta_0"),
    "drives": ("n_starts", "seed", "init_box", "max_iter", "amplitude", "hold", "input_seed", "dt"),
    "paths": ("dataset", "train", "validation", "checkpoint", "measurements"),
}

REQUIRED_KEYS: Dict[str, Tuple[str, ...]] = {
    "model": ("family",),
    "dataset": ("P", "M"),
    "linear_lab": ("P_values", "M_values", "seeds"),
    "drives": ("init_box",),
}


@dataclass
class CliCommand:
    """Configuration for a single subcommand"""
    name: str
    processor_name: str
    action: str
    description: str
    required_sections: List[str] = field(default_factory=list)
    optional_sections: List[str] = field(default_factory=list)
    required_paths: List[str] = field(default_factory=list)

    @property
    def allowed_sections(self) -> List[str]:
        return self.required_sections + self.optional_sections


class DeepBayesCommands:
    """Central configuration for all subcommands"""

    @staticmethod
    def get_all_commands() -> List[CliCommand]:
        return [
            CliCommand(
                name="gen",
                processor_name="dataset",
                action="generate",
                description="Generate a synthetic training set Z_(P,M)",
                required_sections=["model", "dataset"],
                optional_sections=["prior"],
            ),
            CliCommand(
                name="split",
                processor_name="dataset",
                action="split",
                description="Split a dataset file into training and validation files",
                required_sections=["paths"],
                optional_sections=["split"],
                required_paths=["dataset"],
            ),
            CliCommand(
                name="train",
                processor_name="training",
                action="train",
                description="Train one recurrent estimator; a diverged run keeps checkpoint_last_finite.json",
                required_sections=["paths"],
                optional_sections=["rnn", "train"],
                required_paths=["train", "validation"],
            ),
            CliCommand(
                name="tune",
                processor_name="training",
                action="tune",
                description="Grid search over recurrent architectures; grid.csv is kept even when every cell fails",
                required_sections=["paths"],
                optional_sections=["grid", "train"],
                required_paths=["train", "validation"],
            ),
            CliCommand(
                name="eval",
                processor_name="evaluation",
                action="evaluate",
                description="Test MSE and timing of estimators on a test set at theta_0",
                required_sections=["model"],
                optional_sections=["prior", "test", "paths", "mh", "pf"],
            ),
            CliCommand(
                name="mh",
                processor_name="mcmc",
                action="run_chains",
                description="Conditional-mean estimates by particle-filter Metropolis-Hastings",
                required_sections=["model"],
                optional_sections=["prior", "test", "mh", "pf"],
            ),
            CliCommand(
                name="linear-lab",
                processor_name="linear_lab",
                action="convergence",
                description="Convergence of the fitted affine estimator to its asymptotic limit",
                required_sections=["model", "linear_lab"],
                optional_sections=["prior"],
            ),
            CliCommand(
                name="drives-fit",
                processor_name="drives",
                action="fit",
                description="Least-squares fit of the coupled-drives Wiener model to a measured signal",
                required_sections=["paths", "drives"],
                required_paths=["measurements"],
            ),
        ]

    @classmethod
    def get_command(cls, name: str) -> Optional[CliCommand]:
        for command in cls.get_all_commands():
            if command.name == name:
                return command
        return None

    @classmethod
    def get_command_names(cls) -> List[str]:
        return [command.name for command in cls.get_all_commands()]

from typing import Any, Dict

import numpy as np

from config.defaults import (
    ADAM_BETA1,
    ADAM_BETA2,
    ADAM_EPSILON,
    BATCH_SIZE,
    CLIP_NORM,
    EPOCHS,
    LEARNING_RATE,
    LR_DECAY_FACTOR,
    PATIENCE,
    TOLERANCE,
)
from enums.network import CellType
from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError


def _positive_int(name: str, value) -> None:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 1:
        raise InvalidSpecError(f"{name} must be a positive integer, got {value!r}")


class RnnConfig:
    """Architecture of the many-to-one estimator: n_l stacked cells of width n_H, a dense layer of width n_z."""

    def __init__(self, data: Dict[str, Any]):
        self.cell: str = data.get("cell", CellType.GRU.value)
        self.n_l: int = data.get("n_l", 1)
        self.n_H: int = data.get("n_H", 30)
        self.n_z: int = data.get("n_z", 32)
        self.d: int = data.get("d", 2)
        self.input_dim: int = data.get("input_dim", 1)

        self._validate()

    def _validate(self):
        if not CellType.is_valid(self.cell):
            raise InvalidSpecError(f"cell must be one of {CellType.get_valid_cells()}, got {self.cell!r}")
        for name in ("n_l", "n_H", "n_z", "d", "input_dim"):
            _positive_int(name, getattr(self, name))

    @property
    def gate_count(self) -> int:
        return CellType(self.cell).gate_count

    def label(self) -> str:
        return f"{self.cell}-l{self.n_l}-h{self.n_H}-z{self.n_z}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cell": self.cell,
            "n_l": self.n_l,
            "n_H": self.n_H,
            "n_z": self.n_z,
            "d": self.d,
            "input_dim": self.input_dim,
        }


class TrainConfig:

    def __init__(self, data: Dict[str, Any]):
        self.eta0: float = float(data.get("eta0", LEARNING_RATE))
        self.epochs: int = data.get("epochs", EPOCHS)
        self.batch_size: int = data.get("batch_size", BATCH_SIZE)
        self.decay_factor: float = float(data.get("decay_factor", LR_DECAY_FACTOR))
        self.patience: int = data.get("patience", PATIENCE)
        self.tolerance: float = float(data.get("tolerance", TOLERANCE))
        self.seed: int = int(data.get("seed", 0))
        self.clip_norm: float = float(data.get("clip_norm", CLIP_NORM))
        self.beta1: float = float(data.get("beta1", ADAM_BETA1))
        self.beta2: float = float(data.get("beta2", ADAM_BETA2))
        self.epsilon: float = float(data.get("epsilon", ADAM_EPSILON))
        self.early_stopping: bool = bool(data.get("early_stopping", True))

        self._validate()

    def _validate(self):
        if not np.isfinite(self.eta0) or self.eta0 <= 0:
            raise InvalidSpecError(f"eta0 must be positive, got {self.eta0}")
        if not 0 < self.decay_factor <= 1:
            raise InvalidSpecError(f"decay_factor must lie in (0, 1], got {self.decay_factor}")
        if not self.tolerance > 0:
            raise InvalidSpecError(f"tolerance must be positive, got {self.tolerance}")
        if not self.clip_norm > 0:
            raise InvalidSpecError(f"clip_norm must be positive, got {self.clip_norm}")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise InvalidSpecError(f"Adam betas must lie in [0, 1), got {self.beta1}, {self.beta2}")
        for name in ("epochs", "batch_size", "patience"):
            _positive_int(name, getattr(self, name))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "eta0": self.eta0,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "decay_factor": self.decay_factor,
            "patience": self.patience,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "clip_norm": self.clip_norm,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "epsilon": self.epsilon,
            "early_stopping": self.early_stopping,
        }

from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from config.defaults import CHECKPOINT_FORMAT_VERSION
from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError
from helpers.app_logic_helpers.optimizer_helper import AdamState
from helpers.app_logic_helpers.rnn_helper import forward_batch
from models.rnn_weights import RnnWeights


class RnnEstimator:
    """
    Trained network plus the affine input standardisation it was trained with.
    Calling it on a raw signal returns θ̂.
    """

    def __init__(self, weights: RnnWeights, y_mean: float = 0.0, y_std: float = 1.0):
        self.weights: RnnWeights = weights
        self.y_mean: float = float(y_mean)
        self.y_std: float = float(y_std)

        self._validate()

    def _validate(self):
        if not np.isfinite(self.y_mean) or not np.isfinite(self.y_std) or self.y_std <= 0:
            raise InvalidSpecError(f"invalid normalisation statistics mean={self.y_mean}, std={self.y_std}")

    @property
    def config(self):
        return self.weights.config

    def standardize(self, signals) -> np.ndarray:
        return (np.asarray(signals, dtype=np.float64) - self.y_mean) / self.y_std

    def predict_batch(self, signals, batch_size: int = 256) -> np.ndarray:
        signals = np.atleast_2d(np.asarray(signals, dtype=np.float64))
        outputs = []
        for start in range(0, signals.shape[0], batch_size):
            theta_hat, _ = forward_batch(self.weights, self.standardize(signals[start:start + batch_size]))
            outputs.append(theta_hat)
        return np.concatenate(outputs, axis=0)

    def predict(self, y) -> np.ndarray:
        return self.predict_batch(np.asarray(y, dtype=np.float64).reshape(1, -1))[0]

    def __call__(self, y) -> np.ndarray:
        return self.predict(y)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format_version": CHECKPOINT_FORMAT_VERSION,
            "normalization": {"y_mean": self.y_mean, "y_std": self.y_std},
            "weights": self.weights.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RnnEstimator":
        normalization = data["normalization"]
        return cls(RnnWeights.from_dict(data["weights"]), normalization["y_mean"], normalization["y_std"])


class TrainingCheckpoint:
    """
    What a training run leaves behind: the estimator, per-epoch history, the stopping record and
    the optimiser state (Adam moments, step counter, learning rate of the checkpoint epoch) needed
    to continue from it.
    """

    def __init__(self, estimator: RnnEstimator, history: pd.DataFrame, stopped_epoch: Optional[int],
                 checkpoint_epoch: int, train_config: Dict[str, Any], training_seconds: float = 0.0,
                 lowest_epoch: Optional[int] = None, lowest_val_loss: Optional[float] = None,
                 optimizer_state: Optional[Dict[str, Any]] = None, eta: Optional[float] = None):
        self.estimator: RnnEstimator = estimator
        self.history: pd.DataFrame = history
        self.stopped_epoch: Optional[int] = stopped_epoch
        self.checkpoint_epoch: int = checkpoint_epoch
        self.train_config: Dict[str, Any] = train_config
        self.training_seconds: float = float(training_seconds)
        self.lowest_epoch: Optional[int] = lowest_epoch
        self.lowest_val_loss: Optional[float] = lowest_val_loss
        self.optimizer_state: Optional[Dict[str, Any]] = optimizer_state
        self.eta: Optional[float] = None if eta is None else float(eta)

    @property
    def val_loss(self) -> float:
        row = self.history.loc[self.history["epoch"] == self.checkpoint_epoch]
        return float(row["val_loss"].iloc[0])

    @property
    def train_loss(self) -> float:
        row = self.history.loc[self.history["epoch"] == self.checkpoint_epoch]
        return float(row["train_loss"].iloc[0])

    def optimizer(self) -> Optional[AdamState]:
        if self.optimizer_state is None:
            return None
        shapes = {key: array.shape for key, array in self.estimator.weights.items()}
        return AdamState.from_dict(self.optimizer_state, shapes)

    def to_dict(self) -> Dict[str, Any]:
        data = self.estimator.to_dict()
        data.update({
            "train_config": self.train_config,
            "stopped_epoch": self.stopped_epoch,
            "checkpoint_epoch": self.checkpoint_epoch,
            "training_seconds": self.training_seconds,
            "lowest_epoch": self.lowest_epoch,
            "lowest_val_loss": self.lowest_val_loss,
            "optimizer": {"adam": self.optimizer_state, "eta": self.eta, "epoch": self.checkpoint_epoch},
        })
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any], history: Optional[pd.DataFrame] = None) -> "TrainingCheckpoint":
        optimizer = data.get("optimizer") or {}
        if history is None:
            history = pd.DataFrame(columns=["epoch", "train_loss", "val_loss", "eta"])
        return cls(
            estimator=RnnEstimator.from_dict(data),
            history=history,
            stopped_epoch=data.get("stopped_epoch"),
            checkpoint_epoch=int(data["checkpoint_epoch"]),
            train_config=data.get("train_config", {}),
            training_seconds=data.get("training_seconds", 0.0),
            lowest_epoch=data.get("lowest_epoch"),
            lowest_val_loss=data.get("lowest_val_loss"),
            optimizer_state=optimizer.get("adam"),
            eta=optimizer.get("eta"),
        )

from typing import Any, Dict, Optional

import numpy as np

from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError
from helpers.common_helper.common_helper import fingerprint
from models.theta_vector import ThetaVector


class TestSet:
    """K output signals all generated at the same true parameter vector θ0."""

    __test__ = False

    def __init__(self, theta_0: ThetaVector, signals, model_spec, seed: int):
        self.theta_0: ThetaVector = theta_0
        self.signals: np.ndarray = np.atleast_2d(np.asarray(signals, dtype=np.float64))
        self.model_spec = model_spec
        self.seed: int = int(seed)

        self._validate()

    def _validate(self):
        if self.signals.shape[0] < 1:
            raise InvalidSpecError("a test set needs at least one signal")
        if len(self.theta_0) != self.model_spec.theta_dim:
            raise InvalidSpecError(
                f"theta_0 has {len(self.theta_0)} components, model expects {self.model_spec.theta_dim}"
            )

    def __len__(self) -> int:
        return int(self.signals.shape[0])

    @property
    def fingerprint(self) -> str:
        return fingerprint({"theta_0": self.theta_0.tolist(), "model": self.model_spec.to_dict(), "seed": self.seed,
                            "K": len(self)})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theta_0": self.theta_0.tolist(),
            "model": self.model_spec.to_dict(),
            "seed": self.seed,
            "K": len(self),
        }


class EvalReport:

    def __init__(self, method: str, test_mse: float, training_seconds: float = 0.0, inference_seconds: float = 0.0,
                 config_fingerprint: Optional[str] = None, test_fingerprint: Optional[str] = None, n_signals: int = 0):
        self.method = method
        self.test_mse = float(test_mse)
        self.training_seconds = float(training_seconds)
        self.inference_seconds = float(inference_seconds)
        self.config_fingerprint = config_fingerprint
        self.test_fingerprint = test_fingerprint
        self.n_signals = int(n_signals)

        self._validate()

    def _validate(self):
        if not self.method:
            raise InvalidSpecError("report needs a method name")
        if not np.isfinite(self.test_mse) or self.test_mse < 0:
            raise InvalidSpecError(f"test MSE must be finite and non-negative, got {self.test_mse}")
        if self.training_seconds < 0 or self.inference_seconds < 0:
            raise InvalidSpecError("timings must be non-negative")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": self.method,
            "test_mse": self.test_mse,
            "training_seconds": self.training_seconds,
            "inference_seconds": self.inference_seconds,
            "config_fingerprint": self.config_fingerprint,
            "test_fingerprint": self.test_fingerprint,
            "n_signals": self.n_signals,
        }

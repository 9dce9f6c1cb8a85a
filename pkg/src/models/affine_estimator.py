from typing import Any, Dict

import numpy as np

from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError


class AffineEstimator:
    """θ̂(Y) = A Y + b."""

    def __init__(self, A, b):
        self.A: np.ndarray = np.atleast_2d(np.asarray(A, dtype=np.float64))
        self.b: np.ndarray = np.asarray(b, dtype=np.float64).reshape(-1)

        self._validate()

    def _validate(self):
        if self.A.shape[0] != self.b.size:
            raise InvalidSpecError(f"A has {self.A.shape[0]} rows, b has {self.b.size} entries")
        if not (np.all(np.isfinite(self.A)) and np.all(np.isfinite(self.b))):
            raise InvalidSpecError("affine estimator has non-finite entries")

    @property
    def d(self) -> int:
        return int(self.b.size)

    @property
    def N(self) -> int:
        return int(self.A.shape[1])

    def predict(self, y) -> np.ndarray:
        return self.A @ np.asarray(y, dtype=np.float64).reshape(-1) + self.b

    def predict_batch(self, signals) -> np.ndarray:
        """Rows of `signals` are signals; returns one estimate per row."""
        return np.atleast_2d(np.asarray(signals, dtype=np.float64)) @ self.A.T + self.b

    def __call__(self, y) -> np.ndarray:
        return self.predict(y)

    def to_dict(self) -> Dict[str, Any]:
        return {"A": self.A.tolist(), "b": self.b.tolist()}


class PriorMoments:
    """Prior mean μ_θ, second moment about the mean R_θ, and the noise variance λ_v."""

    def __init__(self, mu_theta, R_theta, lambda_v: float):
        self.mu_theta: np.ndarray = np.asarray(mu_theta, dtype=np.float64).reshape(-1)
        self.R_theta: np.ndarray = np.atleast_2d(np.asarray(R_theta, dtype=np.float64))
        self.lambda_v: float = float(lambda_v)

        self._validate()

    def _validate(self):
        d = self.mu_theta.size
        if self.R_theta.shape != (d, d):
            raise InvalidSpecError(f"R_theta must be {d}x{d}, got {self.R_theta.shape}")
        if not np.allclose(self.R_theta, self.R_theta.T, rtol=0.0, atol=1e-12):
            raise InvalidSpecError("R_theta must be symmetric")
        eigenvalues = np.linalg.eigvalsh(self.R_theta)
        if eigenvalues.min() < -1e-12 * max(1.0, float(np.abs(eigenvalues).max())):
            raise InvalidSpecError("R_theta must be positive semi-definite")
        if not np.isfinite(self.lambda_v) or self.lambda_v < 0:
            raise InvalidSpecError(f"lambda_v must be finite and non-negative, got {self.lambda_v}")

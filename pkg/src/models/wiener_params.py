from typing import Any, Dict

import numpy as np

from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError


class WienerParams:
    """
    Physical parameters of the coupled-drives Wiener model
    X(s) = K α ω0² / ((s + α)(s² + 2 ξ ω0 s + ω0²)) U(s),  y_k = |x(t_k)| + v_k,  v_k ~ N(0, λ_v).
    """

    def __init__(self, K: float, alpha: float, omega0: float, xi: float, lambda_v: float = 0.0):
        self.K: float = float(K)
        self.alpha: float = float(alpha)
        self.omega0: float = float(omega0)
        self.xi: float = float(xi)
        self.lambda_v: float = float(lambda_v)

        self._validate()

    def _validate(self):
        values = np.array([self.K, self.alpha, self.omega0, self.xi, self.lambda_v])
        if not np.all(np.isfinite(values)):
            raise InvalidSpecError(f"Wiener parameters must be finite, got {values.tolist()}")
        if self.alpha <= 0 or self.omega0 <= 0:
            raise InvalidSpecError(f"alpha and omega0 must be positive, got alpha={self.alpha}, omega0={self.omega0}")
        if self.lambda_v < 0:
            raise InvalidSpecError(f"lambda_v must be non-negative, got {self.lambda_v}")

    def as_array(self) -> np.ndarray:
        return np.array([self.K, self.alpha, self.omega0, self.xi, self.lambda_v])

    def to_dict(self) -> Dict[str, Any]:
        return {"K": self.K, "alpha": self.alpha, "omega0": self.omega0, "xi": self.xi, "lambda_v": self.lambda_v}


class StateSpaceCT:
    """Continuous-time companion form dx/dt = A x + B u for θ' = [θ1, θ2, θ3, θ4]."""

    def __init__(self, theta_prime, dt: float):
        theta_prime = np.asarray(theta_prime, dtype=np.float64).reshape(-1)
        if theta_prime.size != 4:
            raise InvalidSpecError(f"expected 4 transfer-function parameters, got {theta_prime.size}")
        if not np.isfinite(dt) or dt <= 0:
            raise InvalidSpecError(f"sampling period must be positive, got {dt}")
        t1, t2, t3, t4 = theta_prime
        self.A: np.ndarray = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [t4, t3, t2]])
        self.B: np.ndarray = np.array([0.0, 0.0, t1])
        self.dt: float = float(dt)

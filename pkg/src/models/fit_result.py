from typing import Any, Dict, List

import numpy as np

from models.wiener_params import WienerParams


class FitResult:
    """Outcome of the multi-start least-squares fit of the drives model."""

    def __init__(self, params: WienerParams, theta_prime, residual_norm: float,
                 start_points: np.ndarray, start_objectives: List[float], best_start: int):
        self.params: WienerParams = params
        self.theta_prime: np.ndarray = np.asarray(theta_prime, dtype=np.float64)
        self.residual_norm: float = float(residual_norm)
        self.start_points: np.ndarray = np.asarray(start_points, dtype=np.float64)
        self.start_objectives: List[float] = list(start_objectives)
        self.best_start: int = int(best_start)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "params": self.params.to_dict(),
            "theta_prime": self.theta_prime.tolist(),
            "residual_norm": self.residual_norm,
            "best_start": self.best_start,
            "start_objectives": self.start_objectives,
        }

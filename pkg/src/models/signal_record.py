from typing import Any, Dict

import numpy as np

from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError
from models.theta_vector import ThetaVector


class SignalRecord:
    """One simulated output signal Y_N(θ_p, m) together with the parameters and seed that produced it."""

    def __init__(self, p: int, m: int, theta: ThetaVector, y, seed: int):
        self.p: int = int(p)
        self.m: int = int(m)
        self.theta: ThetaVector = theta
        self.y: np.ndarray = np.asarray(y, dtype=np.float64).reshape(-1)
        self.seed: int = int(seed)

        self._validate()

    def _validate(self):
        if self.p < 0 or self.m < 0:
            raise InvalidSpecError(f"record indices must be non-negative, got (p={self.p}, m={self.m})")
        if self.y.size == 0:
            raise InvalidSpecError(f"record (p={self.p}, m={self.m}) has an empty signal")

    @property
    def length(self) -> int:
        return int(self.y.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignalRecord):
            return NotImplemented
        return (
            self.p == other.p
            and self.m == other.m
            and self.seed == other.seed
            and self.theta == other.theta
            and np.array_equal(self.y, other.y)
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "m": self.m,
            "seed": self.seed,
            "theta": self.theta.to_dict(),
            "n": self.length,
            "y": self.y.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SignalRecord":
        return cls(data["p"], data["m"], ThetaVector.from_dict(data["theta"]), data["y"], data["seed"])

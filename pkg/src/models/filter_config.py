from typing import Any, Dict, Optional

import numpy as np

from config.defaults import N_PARTICLES
from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError

SYSTEMATIC = "systematic"
VALID_RESAMPLING = (SYSTEMATIC,)


class PfConfig:

    def __init__(self, data: Optional[Dict[str, Any]] = None):
        data = data or {}
        self.n_particles: int = data.get("n_particles", N_PARTICLES)
        self.resampling: str = data.get("resampling", SYSTEMATIC)
        self.seed: int = int(data.get("seed", 0))

        self._validate()

    def _validate(self):
        if not isinstance(self.n_particles, (int, np.integer)) or isinstance(self.n_particles, bool) \
                or self.n_particles < 1:
            raise InvalidSpecError(f"n_particles must be a positive integer, got {self.n_particles!r}")
        if self.resampling not in VALID_RESAMPLING:
            raise InvalidSpecError(f"resampling must be one of {VALID_RESAMPLING}, got {self.resampling!r}")

    def to_dict(self) -> Dict[str, Any]:
        return {"n_particles": self.n_particles, "resampling": self.resampling, "seed": self.seed}


class LgssSpec:
    """
    Scalar linear-Gaussian state space model
        x_{k+1} = a x_k + b u_k + w_k,  w_k ~ N(0, q)
        y_k     = c x_k + v_k,          v_k ~ N(0, r)
    with x_1 ~ N(0, P1); P1 defaults to q.
    """

    def __init__(self, a: float, b: float, c: float, q: float, r: float, N: int, P1: Optional[float] = None):
        self.a = float(a)
        self.b = float(b)
        self.c = float(c)
        self.q = float(q)
        self.r = float(r)
        self.N = int(N)
        self.P1 = self.q if P1 is None else float(P1)

        self._validate()

    def _validate(self):
        values = np.array([self.a, self.b, self.c, self.q, self.r, self.P1])
        if not np.all(np.isfinite(values)):
            raise InvalidSpecError(f"LGSS parameters must be finite, got {values.tolist()}")
        if self.q <= 0 or self.r <= 0:
            raise InvalidSpecError(f"q and r must be positive, got q={self.q}, r={self.r}")
        if self.P1 < 0:
            raise InvalidSpecError(f"initial variance must be non-negative, got {self.P1}")
        if self.N < 0:
            raise InvalidSpecError(f"N must be non-negative, got {self.N}")

    def to_dict(self) -> Dict[str, Any]:
        return {"a": self.a, "b": self.b, "c": self.c, "q": self.q, "r": self.r, "N": self.N, "P1": self.P1}

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.defaults import INITIAL_PROPOSAL_STD, T_BURN_IN, T_REQUIRED
from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError


class MhConfig:
    """
    Settings of one Metropolis-Hastings chain. The random walk runs on the logit scale of each
    bounded component; proposal_cov is the covariance of that walk.
    """

    def __init__(self, bounds: Sequence[Tuple[float, float]], theta_init: Optional[Sequence[float]] = None,
                 proposal_cov=None, T_burn_in: int = T_BURN_IN, T_reqd: int = T_REQUIRED, seed: int = 0,
                 recompute_current: bool = False):
        self.bounds: np.ndarray = np.asarray(bounds, dtype=np.float64).reshape(-1, 2)
        d = self.bounds.shape[0]
        if theta_init is None:
            theta_init = self.bounds.mean(axis=1)
        self.theta_init: np.ndarray = np.asarray(theta_init, dtype=np.float64).reshape(-1)
        if proposal_cov is None:
            proposal_cov = (INITIAL_PROPOSAL_STD ** 2) * np.eye(d)
        self.proposal_cov: np.ndarray = np.atleast_2d(np.asarray(proposal_cov, dtype=np.float64))
        self.T_burn_in: int = int(T_burn_in)
        self.T_reqd: int = int(T_reqd)
        self.seed: int = int(seed)
        self.recompute_current: bool = bool(recompute_current)

        self._validate()

    def _validate(self):
        d = self.bounds.shape[0]
        if d == 0 or not np.all(np.isfinite(self.bounds)) or np.any(self.bounds[:, 0] >= self.bounds[:, 1]):
            raise InvalidSpecError(f"bounds must be finite increasing intervals, got {self.bounds.tolist()}")
        if self.theta_init.size != d:
            raise InvalidSpecError(f"initial theta has {self.theta_init.size} components, bounds have {d}")
        inside = (self.bounds[:, 0] < self.theta_init) & (self.theta_init < self.bounds[:, 1])
        if not np.all(inside):
            raise InvalidSpecError(f"initial theta {self.theta_init.tolist()} is not strictly inside the bounds")
        if self.proposal_cov.shape != (d, d):
            raise InvalidSpecError(f"proposal covariance must be {d}x{d}, got {self.proposal_cov.shape}")
        if not np.allclose(self.proposal_cov, self.proposal_cov.T, rtol=0.0, atol=1e-12):
            raise InvalidSpecError("proposal covariance must be symmetric")
        if np.linalg.eigvalsh(self.proposal_cov).min() <= 0:
            raise InvalidSpecError("proposal covariance must be positive definite")
        if self.T_burn_in < 0 or self.T_reqd < 1:
            raise InvalidSpecError(f"need T_burn_in >= 0 and T_reqd >= 1, got {self.T_burn_in}, {self.T_reqd}")

    @property
    def d(self) -> int:
        return int(self.bounds.shape[0])

    @property
    def length(self) -> int:
        return self.T_burn_in + self.T_reqd

    def replace(self, **changes) -> "MhConfig":
        data = {
            "bounds": self.bounds, "theta_init": self.theta_init, "proposal_cov": self.proposal_cov,
            "T_burn_in": self.T_burn_in, "T_reqd": self.T_reqd, "seed": self.seed,
            "recompute_current": self.recompute_current,
        }
        data.update(changes)
        return MhConfig(**data)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bounds": self.bounds.tolist(),
            "theta_init": self.theta_init.tolist(),
            "proposal_cov": self.proposal_cov.tolist(),
            "T_burn_in": self.T_burn_in,
            "T_reqd": self.T_reqd,
            "seed": self.seed,
            "recompute_current": self.recompute_current,
        }


class MarkovChain:
    """
    Draws θ^(1..T) (row 0 is the initial point), the proposal made at each step, whether it was
    accepted, the log-likelihood of the current state and the number of failed evaluations.
    """

    def __init__(self, theta_draws, proposals, accept_flags, log_lik, burn_in: int, failures: int = 0,
                 failure_steps: Optional[List[int]] = None):
        self.theta_draws: np.ndarray = np.asarray(theta_draws, dtype=np.float64)
        self.proposals: np.ndarray = np.asarray(proposals, dtype=np.float64)
        self.accept_flags: np.ndarray = np.asarray(accept_flags, dtype=bool)
        self.log_lik: np.ndarray = np.asarray(log_lik, dtype=np.float64)
        self.burn_in: int = int(burn_in)
        self.failures: int = int(failures)
        self.failure_steps: List[int] = list(failure_steps or [])

    def __len__(self) -> int:
        return int(self.theta_draws.shape[0])

    @property
    def post_burn_in(self) -> np.ndarray:
        return self.theta_draws[self.burn_in:]

    @property
    def acceptance_rate(self) -> float:
        steps = self.accept_flags[1:]
        return float(steps.mean()) if steps.size else 0.0

    def estimate(self) -> np.ndarray:
        segment = self.post_burn_in
        if segment.shape[0] == 0:
            raise InvalidSpecError("chain has no draws after burn-in")
        return segment.mean(axis=0)

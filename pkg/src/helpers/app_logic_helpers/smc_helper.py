"""
Likelihood evaluation for state space models: a bootstrap particle filter for the growth models
and the exact Kalman filter for scalar linear-Gaussian models.

Time runs k = 1..N: y_k is scored against x_k, then x_{k+1} is drawn from the transition with u_k.
"""

import itertools
from typing import Callable, Optional, Protocol, Tuple, Union

import numpy as np
from scipy.special import logsumexp

from exceptions.deepbayes_exceptions.exceptions import (
    DegenerateFilterError,
    InvalidParameterError,
    InvalidSpecError,
)
from helpers.app_logic_helpers.simulation_helper import generate_input
from helpers.common_helper.logger_helper import LoggerHelper
from helpers.common_helper.rng_helper import STREAM_PF, derive_seed, make_rng
from models.filter_config import LgssSpec, PfConfig
from models.model_spec import GrowthModelSpec
from models.theta_vector import ThetaVector

logger = LoggerHelper(__name__).get_logger()

LOG_2PI = np.log(2.0 * np.pi)


def _gaussian_logpdf(y: float, mean: np.ndarray, variance: float) -> np.ndarray:
    residual = y - mean
    return -0.5 * (LOG_2PI + np.log(variance) + residual * residual / variance)


class StateSpaceModel(Protocol):
    """What the bootstrap filter needs from a model."""

    def initial(self, rng: np.random.Generator, n: int) -> np.ndarray:
        ...

    def propagate(self, particles: np.ndarray, u_k: float, rng: np.random.Generator) -> np.ndarray:
        ...

    def log_observation(self, y_k: float, particles: np.ndarray) -> np.ndarray:
        ...


class GrowthStateSpace:
    """Growth model at a fixed θ; x_1 = 0 for every particle."""

    def __init__(self, spec: GrowthModelSpec, theta_free):
        values = theta_free.values if isinstance(theta_free, ThetaVector) else theta_free
        self.theta = spec.assemble(values)
        process_variance, measurement_variance = self.theta[6], self.theta[7]
        if process_variance < 0:
            raise InvalidParameterError(f"process noise variance must be non-negative, got {process_variance}")
        if measurement_variance <= 0:
            raise InvalidParameterError(f"measurement noise variance must be positive, got {measurement_variance}")
        self.process_std = float(np.sqrt(process_variance))
        self.measurement_variance = float(measurement_variance)

    def initial(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.zeros(n)

    def propagate(self, particles: np.ndarray, u_k: float, rng: np.random.Generator) -> np.ndarray:
        t1, t2, t3, t4, t5 = self.theta[:5]
        drift = t1 * particles + t2 * particles / (t3 * particles * particles + t4) + t5 * u_k
        return drift + self.process_std * rng.standard_normal(particles.size)

    def log_observation(self, y_k: float, particles: np.ndarray) -> np.ndarray:
        return _gaussian_logpdf(y_k, self.theta[5] * particles * particles, self.measurement_variance)


class LgssStateSpace:

    def __init__(self, spec: LgssSpec):
        self.spec = spec

    def initial(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.sqrt(self.spec.P1) * rng.standard_normal(n)

    def propagate(self, particles: np.ndarray, u_k: float, rng: np.random.Generator) -> np.ndarray:
        spec = self.spec
        return spec.a * particles + spec.b * u_k + np.sqrt(spec.q) * rng.standard_normal(particles.size)

    def log_observation(self, y_k: float, particles: np.ndarray) -> np.ndarray:
        return _gaussian_logpdf(y_k, self.spec.c * particles, self.spec.r)


def simulate_lgss(spec: LgssSpec, u, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """Returns (y, x) with x of length N + 1."""
    u = np.asarray(u, dtype=np.float64).reshape(-1)
    if u.size != spec.N:
        raise InvalidSpecError(f"input has {u.size} samples, model expects {spec.N}")
    rng = make_rng(seed)
    x = np.empty(spec.N + 1)
    x[0] = np.sqrt(spec.P1) * rng.standard_normal()
    w = np.sqrt(spec.q) * rng.standard_normal(spec.N)
    v = np.sqrt(spec.r) * rng.standard_normal(spec.N)
    for k in range(spec.N):
        x[k + 1] = spec.a * x[k] + spec.b * u[k] + w[k]
    return spec.c * x[:spec.N] + v, x


def systematic_resample(weights, seed: Union[int, np.random.Generator], n: Optional[int] = None) -> np.ndarray:
    """n indices with count_i within floor(n w_i) and ceil(n w_i), from a single uniform offset."""
    weights = np.asarray(weights, dtype=np.float64).reshape(-1)
    if weights.size == 0:
        raise InvalidParameterError("cannot resample from an empty weight vector")
    if np.any(weights < 0) or not np.all(np.isfinite(weights)):
        raise InvalidParameterError("resampling weights must be finite and non-negative")
    if abs(weights.sum() - 1.0) > 1e-10:
        raise InvalidParameterError(f"resampling weights must sum to 1, got {weights.sum()!r}")
    n = weights.size if n is None else int(n)
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)

    positions = (rng.uniform() + np.arange(n)) / n
    cumulative = np.cumsum(weights)
    cumulative[-1] = 1.0
    return np.minimum(np.searchsorted(cumulative, positions, side="right"), weights.size - 1)


def state_space_for(model, theta=None) -> StateSpaceModel:
    if isinstance(model, GrowthModelSpec):
        if theta is None:
            raise InvalidSpecError("growth model needs a parameter vector")
        return GrowthStateSpace(model, theta)
    if isinstance(model, LgssSpec):
        return LgssStateSpace(model)
    if all(hasattr(model, name) for name in ("initial", "propagate", "log_observation")):
        return model
    raise InvalidSpecError(f"no state space model for {type(model).__name__}")


def pf_loglik(model, theta, y, u, cfg: PfConfig) -> float:
    """
    Bootstrap particle filter estimate of log p(y | θ): the log of the mean unnormalised weight at
    each step, summed, with systematic resampling after every step.
    """
    state_space = state_space_for(model, theta)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    u = np.asarray(u, dtype=np.float64).reshape(-1)
    if u.size < y.size:
        raise InvalidSpecError(f"input has {u.size} samples, output has {y.size}")

    rng = make_rng(cfg.seed, STREAM_PF)
    n = cfg.n_particles
    particles = state_space.initial(rng, n)
    log_n = np.log(n)
    loglik = 0.0
    for k in range(y.size):
        log_weights = state_space.log_observation(y[k], particles)
        log_weights[np.isnan(log_weights)] = -np.inf
        log_mean = logsumexp(log_weights) - log_n
        if not np.isfinite(log_mean):
            raise DegenerateFilterError(f"all particle weights vanished at step {k + 1}", step=k + 1)
        loglik += log_mean
        if k + 1 < y.size:
            weights = np.exp(log_weights - logsumexp(log_weights))
            particles = particles[systematic_resample(weights / weights.sum(), rng)]
            particles = state_space.propagate(particles, u[k], rng)
    return float(loglik)


def kalman_loglik(spec: LgssSpec, y, u) -> float:
    """Exact log-likelihood by the prediction-error decomposition."""
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    u = np.asarray(u, dtype=np.float64).reshape(-1)
    mean, variance = 0.0, spec.P1
    loglik = 0.0
    for k in range(y.size):
        innovation_variance = spec.c * spec.c * variance + spec.r
        if innovation_variance <= 0:
            raise InvalidParameterError(f"innovation variance {innovation_variance} at step {k + 1}")
        innovation = y[k] - spec.c * mean
        loglik += -0.5 * (LOG_2PI + np.log(innovation_variance) + innovation * innovation / innovation_variance)
        gain = variance * spec.c / innovation_variance
        filtered_mean = mean + gain * innovation
        filtered_variance = (1.0 - gain * spec.c) * variance
        mean = spec.a * filtered_mean + spec.b * u[k]
        variance = spec.a * spec.a * filtered_variance + spec.q
    return float(loglik)


def make_pf_loglik(model_spec: GrowthModelSpec, y, cfg: PfConfig, u=None) -> Callable[[np.ndarray], float]:
    """θ ↦ PF log-likelihood of y. Every call runs the filter on a fresh stream."""
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    u = generate_input(model_spec.input) if u is None else np.asarray(u, dtype=np.float64).reshape(-1)
    counter = itertools.count()

    def loglik(theta) -> float:
        call_cfg = PfConfig({
            "n_particles": cfg.n_particles,
            "resampling": cfg.resampling,
            "seed": derive_seed(cfg.seed, STREAM_PF, next(counter)),
        })
        return pf_loglik(model_spec, np.asarray(theta, dtype=np.float64), y, u, call_cfg)

    loglik.n_particles = cfg.n_particles
    return loglik

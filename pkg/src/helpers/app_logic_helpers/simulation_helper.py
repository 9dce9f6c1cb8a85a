"""
Simulators for the discrete-time model families: input generation, the FIR model and the
growth model (generic, M1, M2). All functions are pure in (spec, θ, seed).
"""

from typing import Tuple, Union

import numpy as np

from config.model_constants import COSINE_INPUT_FREQUENCY
from enums.signal_kind import InputKind
from exceptions.deepbayes_exceptions.exceptions import InvalidParameterError, InvalidSpecError
from helpers.common_helper.logger_helper import LoggerHelper
from helpers.common_helper.rng_helper import STREAM_INPUT, make_rng
from models.input_signal import InputSignal
from models.model_spec import GrowthModelSpec
from models.theta_vector import ThetaVector

logger = LoggerHelper(__name__).get_logger()

ThetaLike = Union[ThetaVector, np.ndarray, list, tuple]


def _values(theta: ThetaLike) -> np.ndarray:
    if isinstance(theta, ThetaVector):
        return theta.values
    return np.asarray(theta, dtype=np.float64).reshape(-1)


def generate_input(spec: InputSignal) -> np.ndarray:
    n = spec.length
    if spec.kind == InputKind.COSINE.value:
        # k runs 1..N
        return np.cos(COSINE_INPUT_FREQUENCY * np.arange(1, n + 1, dtype=np.float64))

    rng = make_rng(spec.seed, STREAM_INPUT)
    if spec.kind == InputKind.UNIFORM.value:
        return rng.uniform(0.0, 1.0, size=n)

    blocks = -(-n // spec.hold)
    signs = rng.choice(np.array([-1.0, 1.0]), size=blocks)
    return spec.amplitude * np.repeat(signs, spec.hold)[:n]


def build_fir_regressor(u, order: int) -> np.ndarray:
    """Regressor Φ with Φ[k, l] = u[k - l] and zeros where the index falls before the first sample."""
    u = np.asarray(u, dtype=np.float64).reshape(-1)
    n = u.size
    if not isinstance(order, (int, np.integer)) or order < 1 or order > n:
        raise InvalidSpecError(f"FIR order must lie in 1..{n}, got {order!r}")
    phi = np.zeros((n, order), dtype=np.float64)
    for lag in range(order):
        phi[lag:, lag] = u[: n - lag]
    return phi


def simulate_fir(theta: ThetaLike, u, noise_std: float, seed: int) -> np.ndarray:
    values = _values(theta)
    u = np.asarray(u, dtype=np.float64).reshape(-1)
    if values.size > u.size:
        raise InvalidSpecError(f"FIR order {values.size} exceeds signal length {u.size}")
    if not np.isfinite(noise_std) or noise_std < 0:
        raise InvalidSpecError(f"noise_std must be finite and non-negative, got {noise_std}")
    clean = build_fir_regressor(u, values.size) @ values
    noise = make_rng(seed).standard_normal(u.size)
    return clean + noise_std * noise


def simulate_growth(spec: GrowthModelSpec, theta_free: ThetaLike, seed: int, u=None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Returns (y, x) with y of length N and x of length N + 1 (x[0] = x_1 = 0).
    w and v are always drawn, so streams line up whether or not a variance is zero.
    """
    theta = spec.assemble(_values(theta_free))
    process_variance, measurement_variance = theta[6], theta[7]
    if process_variance < 0 or measurement_variance < 0:
        raise InvalidParameterError(
            f"noise variances must be non-negative, got θ7={process_variance}, θ8={measurement_variance}"
        )

    n = spec.length
    if u is None:
        u = generate_input(spec.input)
    rng = make_rng(seed)
    w = rng.standard_normal(n) * np.sqrt(process_variance)
    v = rng.standard_normal(n) * np.sqrt(measurement_variance)

    t1, t2, t3, t4, t5, t6 = theta[:6]
    x = np.zeros(n + 1, dtype=np.float64)
    for k in range(n):
        xk = x[k]
        x[k + 1] = t1 * xk + t2 * (xk / (t3 * xk * xk + t4)) + t5 * u[k] + w[k]

    y = t6 * x[:n] ** 2 + v
    if not np.all(np.isfinite(y)):
        bad = int(np.flatnonzero(~np.isfinite(y))[0])
        raise InvalidParameterError(f"growth simulation produced a non-finite output at step {bad + 1}")
    return y, x

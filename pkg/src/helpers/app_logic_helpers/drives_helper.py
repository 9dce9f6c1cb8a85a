"""
Coupled electric drives: third-order Wiener model with a rectified output.
Covers the parameter mapping between physical and transfer-function forms, zero-order-hold
sampling, simulation, the closed-form Gaussian log-likelihood and the multi-start
least-squares fit used to centre the prior.
"""

from typing import List, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.linalg import expm
from scipy.optimize import minimize
from scipy.signal import lfilter
from scipy.stats import qmc

from config.defaults import NELDER_MEAD_MAX_ITER, N_STARTS
from config.model_constants import (
    DRIVES_NOISE_PRIOR_UPPER,
    DRIVES_PRIOR_SPREAD,
    VARIANCE_PRIOR_EPSILON,
)
from enums.signal_kind import InputKind
from exceptions.deepbayes_exceptions.exceptions import (
    DatasetFormatError,
    InvalidParameterError,
    InvalidSpecError,
    MappingError,
    NoFitError,
)
from helpers.app_logic_helpers.simulation_helper import generate_input
from helpers.common_helper.logger_helper import LoggerHelper
from helpers.common_helper.rng_helper import make_rng
from models.fit_result import FitResult
from models.input_signal import InputSignal
from models.prior_spec import PriorSpec, UniformPrior
from models.wiener_params import StateSpaceCT, WienerParams

logger = LoggerHelper(__name__).get_logger()

MEASUREMENT_COLUMNS = ("time_s", "y_volts")


def wiener_to_tf(params: WienerParams) -> np.ndarray:
    """(s + α)(s² + 2ξω0 s + ω0²) expanded to s³ − θ2 s² − θ3 s − θ4, numerator θ1 = K α ω0²."""
    k, alpha, omega0, xi = params.K, params.alpha, params.omega0, params.xi
    theta1 = k * alpha * omega0 ** 2
    theta2 = -(2.0 * xi * omega0 + alpha)
    theta3 = -(omega0 ** 2 + 2.0 * alpha * xi * omega0)
    theta4 = -alpha * omega0 ** 2
    return np.array([theta1, theta2, theta3, theta4])


def _cubic_discriminant(b: float, c: float, d: float) -> Tuple[float, float]:
    terms = np.array([18.0 * b * c * d, -4.0 * b ** 3 * d, b * b * c * c, -4.0 * c ** 3, -27.0 * d * d])
    return float(terms.sum()), float(np.max(np.abs(terms)))


def tf_to_wiener(theta_prime, lambda_v: float = 0.0) -> WienerParams:
    theta_prime = np.asarray(theta_prime, dtype=np.float64).reshape(-1)
    if theta_prime.size != 4 or not np.all(np.isfinite(theta_prime)):
        raise MappingError(f"expected 4 finite transfer-function parameters, got {theta_prime.tolist()}")
    theta1, theta2, theta3, theta4 = theta_prime
    if theta4 == 0.0:
        raise MappingError("theta4 = 0 leaves the static gain K = -theta1/theta4 undefined")

    # monic cubic s³ + b s² + c s + d
    b, c, d = -theta2, -theta3, -theta4
    discriminant, scale = _cubic_discriminant(b, c, d)
    if discriminant >= -1e-12 * scale:
        raise MappingError(
            f"denominator s^3 - ({theta2})s^2 - ({theta3})s - ({theta4}) has three real roots; "
            "the real pole is ambiguous"
        )

    roots = np.roots([1.0, b, c, d])
    real_root = float(roots[np.argmin(np.abs(roots.imag))].real)
    for _ in range(3):
        value = ((real_root + b) * real_root + c) * real_root + d
        slope = (3.0 * real_root + 2.0 * b) * real_root + c
        if slope == 0.0:
            break
        real_root -= value / slope
    if real_root >= 0.0:
        raise MappingError(f"real pole {real_root} is not negative; the model is unstable")

    alpha = -real_root
    omega0 = float(np.sqrt(-theta4 / alpha))
    xi = (-theta2 - alpha) / (2.0 * omega0)
    k = -theta1 / theta4
    return WienerParams(k, alpha, omega0, xi, lambda_v)


def zoh_discretize(A, B, dt: float) -> Tuple[np.ndarray, np.ndarray]:
    """Ad = exp(A dt), Bd = ∫_0^dt exp(A τ) dτ B, both read off one augmented matrix exponential."""
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    B = np.asarray(B, dtype=np.float64).reshape(A.shape[0], -1)
    if not np.isfinite(dt) or dt <= 0:
        raise InvalidSpecError(f"sampling period must be positive, got {dt}")
    n, m = B.shape

    block = np.zeros((n + m, n + m))
    block[:n, :n] = A
    block[:n, n:] = B
    block_exp = expm(block * dt)

    Ad = block_exp[:n, :n]
    Bd = block_exp[:n, n:]
    if not (np.all(np.isfinite(Ad)) and np.all(np.isfinite(Bd))):
        raise InvalidParameterError("zero-order-hold discretization produced non-finite entries")
    if m == 1:
        Bd = Bd[:, 0]
    return Ad, Bd


def x1_path(theta_prime, u, dt: float) -> np.ndarray:
    """
    First state of the sampled system x_{k+1} = Ad x_k + Bd u_k from x_1 = 0, evaluated as the
    equivalent strictly proper IIR filter.
    """
    u = np.asarray(u, dtype=np.float64).reshape(-1)
    system = StateSpaceCT(theta_prime, dt)
    Ad, Bd = zoh_discretize(system.A, system.B, dt)

    denominator = np.real(np.poly(Ad))
    # Markov parameters h_j = C Ad^(j-1) Bd give the numerator through conv(den, h)
    markov = np.empty(3)
    state = Bd.copy()
    for j in range(3):
        markov[j] = state[0]
        state = Ad @ state
    numerator = np.zeros(4)
    for j in range(1, 4):
        numerator[j] = sum(denominator[i] * markov[j - i - 1] for i in range(j))

    with np.errstate(over="ignore", invalid="ignore"):
        path = lfilter(numerator, denominator, u)
    if not np.all(np.isfinite(path)):
        step = int(np.flatnonzero(~np.isfinite(path))[0]) + 1
        raise InvalidParameterError(f"drives simulation overflowed at step {step}")
    return path


def simulate_wiener(theta_prime, lambda_v: float, u, dt: float, seed: int) -> np.ndarray:
    if not np.isfinite(lambda_v) or lambda_v < 0:
        raise InvalidParameterError(f"lambda_v must be non-negative, got {lambda_v}")
    x1 = x1_path(theta_prime, u, dt)
    noise = make_rng(seed).standard_normal(x1.size)
    return np.abs(x1) + np.sqrt(lambda_v) * noise


def closed_form_loglik(y_meas, x1, lambda_v: float) -> float:
    """Σ_k log N(y_k; |x1_k|, λ_v)."""
    y_meas = np.asarray(y_meas, dtype=np.float64).reshape(-1)
    x1 = np.asarray(x1, dtype=np.float64).reshape(-1)
    if lambda_v <= 0:
        raise InvalidParameterError(f"lambda_v must be positive, got {lambda_v}")
    if y_meas.size != x1.size:
        raise InvalidSpecError(f"signal lengths differ: {y_meas.size} vs {x1.size}")
    residual = y_meas - np.abs(x1)
    return float(-0.5 * y_meas.size * np.log(2.0 * np.pi * lambda_v) - 0.5 * np.sum(residual ** 2) / lambda_v)


def _residual_norm(params: np.ndarray, y_meas: np.ndarray, u: np.ndarray, dt: float) -> float:
    k, alpha, omega0, xi = params
    if alpha <= 0 or omega0 <= 0:
        return np.inf
    theta_prime = wiener_to_tf(WienerParams(k, alpha, omega0, xi))
    try:
        x1 = x1_path(theta_prime, u, dt)
    except (InvalidParameterError, InvalidSpecError):
        return np.inf
    return float(np.linalg.norm(y_meas - np.abs(x1)))


def fit_lsq(y_meas, u, dt: float, init_box: Sequence[Tuple[float, float]],
            n_starts: int = N_STARTS, seed: int = 0, max_iter: int = NELDER_MEAD_MAX_ITER) -> FitResult:
    """
    Multi-start Nelder-Mead fit of (K, α, ω0, ξ) minimising ‖y_meas − |x1(θ)|‖₂.
    Starts are a Latin hypercube over init_box; the search runs in box-normalised coordinates.
    """
    y_meas = np.asarray(y_meas, dtype=np.float64).reshape(-1)
    u = np.asarray(u, dtype=np.float64).reshape(-1)
    if y_meas.size == 0 or y_meas.size != u.size:
        raise InvalidSpecError(f"need equal, non-empty signals, got y={y_meas.size}, u={u.size}")
    box = np.asarray(init_box, dtype=np.float64)
    if box.shape != (4, 2) or np.any(box[:, 0] >= box[:, 1]):
        raise InvalidSpecError(f"init_box must give 4 increasing intervals, got {box.tolist()}")

    low, width = box[:, 0], box[:, 1] - box[:, 0]

    def objective(z: np.ndarray) -> float:
        return _residual_norm(low + z * width, y_meas, u, dt)

    starts = qmc.LatinHypercube(d=4, seed=make_rng(seed)).random(n_starts)
    options = {"xatol": 1e-10, "fatol": 1e-14, "maxiter": max_iter, "maxfev": 2 * max_iter, "adaptive": True}

    finals: List[np.ndarray] = []
    objectives: List[float] = []
    for index, start in enumerate(starts):
        result = minimize(objective, start, method="Nelder-Mead", options=options)
        # a restart from the optimum rebuilds a collapsed simplex
        result = minimize(objective, result.x, method="Nelder-Mead", options=options)
        finals.append(result.x)
        objectives.append(float(result.fun))
        logger.debug("drives fit start %d: objective %.6e after %d evaluations", index, result.fun, result.nfev)

    finite = [i for i, value in enumerate(objectives) if np.isfinite(value)]
    if not finite:
        raise NoFitError(f"all {n_starts} starts diverged; objectives {objectives}")
    best = min(finite, key=lambda i: (objectives[i], i))

    k, alpha, omega0, xi = low + finals[best] * width
    # |x1| cannot tell K from -K
    params = WienerParams(abs(k), alpha, omega0, xi)
    logger.info("drives fit: best start %d, residual norm %.6e", best, objectives[best])
    return FitResult(
        params=params,
        theta_prime=wiener_to_tf(params),
        residual_norm=objectives[best],
        start_points=low + starts * width,
        start_objectives=objectives,
        best_start=best,
    )


def build_drives_prior(theta_star) -> PriorSpec:
    """Uniform ±20 % around each transfer-function parameter plus λ_v ~ U[ε, 0.01]."""
    theta_star = np.asarray(theta_star, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(theta_star)):
        raise InvalidSpecError(f"theta_star must be finite, got {theta_star.tolist()}")
    components = []
    for index, value in enumerate(theta_star):
        if value == 0.0:
            raise InvalidSpecError(f"component {index + 1} is zero; a ±20% interval around it is degenerate")
        ends = sorted(((1.0 - DRIVES_PRIOR_SPREAD) * value, (1.0 + DRIVES_PRIOR_SPREAD) * value))
        components.append(UniformPrior(ends[0], ends[1]))
    components.append(UniformPrior(VARIANCE_PRIOR_EPSILON, DRIVES_NOISE_PRIOR_UPPER, positive=True))
    return PriorSpec(components)


def reconstruct_prbs(length: int, amplitude: float, hold: int, seed: int) -> np.ndarray:
    """Benchmark input: ±amplitude held for `hold` samples, hold windows aligned to the first sample."""
    return generate_input(
        InputSignal({"kind": InputKind.PRBS.value, "length": length, "amplitude": amplitude, "hold": hold, "seed": seed})
    )


def read_measurement_csv(path: str) -> Tuple[np.ndarray, np.ndarray]:
    """Two-column (time_s, y_volts) measurement file."""
    try:
        frame = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DatasetFormatError(f"cannot parse measurement file {path}: {e}")
    missing = [column for column in MEASUREMENT_COLUMNS if column not in frame.columns]
    if missing:
        raise DatasetFormatError(f"measurement file {path} lacks columns {missing}", line=1)
    values = frame[list(MEASUREMENT_COLUMNS)].apply(pd.to_numeric, errors="coerce").to_numpy(dtype=np.float64)
    bad_rows = np.flatnonzero(~np.all(np.isfinite(values), axis=1))
    if bad_rows.size:
        raise DatasetFormatError(f"measurement file {path} has non-numeric values", line=int(bad_rows[0]) + 2)
    return values[:, 0], values[:, 1]


def signal_table(time_s, y_meas, y_sim) -> pd.DataFrame:
    return pd.DataFrame({"time_s": time_s, "y_measured": y_meas, "y_simulated": y_sim})

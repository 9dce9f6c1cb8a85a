"""
Affine estimators for the FIR toy model.

fit_affine solves the stacked least-squares problem with a constant regressor appended to
every signal; asymptotic_affine gives its limit for P, M → ∞, which for a Gaussian prior is
the exact conditional mean.
"""

from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import linalg
from tqdm import tqdm

from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError, SingularSystemError
from helpers.app_logic_helpers.dataset_helper import sample_prior
from helpers.app_logic_helpers.evaluation_helper import build_test_set
from helpers.app_logic_helpers.simulation_helper import build_fir_regressor, generate_input, simulate_fir
from helpers.common_helper.logger_helper import LoggerHelper
from helpers.common_helper.rng_helper import STREAM_RECORD, STREAM_TEST, derive_seed
from models.affine_estimator import AffineEstimator, PriorMoments
from models.model_spec import FirModelSpec
from models.prior_spec import GaussianPrior, PriorSpec
from models.synthetic_dataset import SyntheticDataset

logger = LoggerHelper(__name__).get_logger()

# where the convergence test signals come from
TEST_DRAW_THETA_0 = "theta_0"
TEST_DRAW_PRIOR = "prior"
TEST_DRAWS = (TEST_DRAW_THETA_0, TEST_DRAW_PRIOR)


def _augment(signals: np.ndarray) -> np.ndarray:
    return np.hstack([signals, np.ones((signals.shape[0], 1))])


def _split_coefficients(coefficients: np.ndarray) -> AffineEstimator:
    # rows 0..N-1 hold Aᵀ, the last row holds b
    return AffineEstimator(coefficients[:-1].T, coefficients[-1])


def fit_affine(dataset: SyntheticDataset) -> AffineEstimator:
    signals, thetas = dataset.signals(), dataset.thetas()
    return fit_affine_arrays(signals, thetas)


def fit_affine_arrays(signals, thetas) -> AffineEstimator:
    signals = np.atleast_2d(np.asarray(signals, dtype=np.float64))
    thetas = np.atleast_2d(np.asarray(thetas, dtype=np.float64))
    design = _augment(signals)
    coefficients, _, rank, _ = linalg.lstsq(design, thetas, lapack_driver="gelsd")
    if rank < design.shape[1]:
        raise SingularSystemError(
            f"stacked design matrix has rank {rank} but {design.shape[1]} columns "
            f"({design.shape[0]} records, signal length {signals.shape[1]} plus a constant); "
            "more records or a richer input are needed"
        )
    return _split_coefficients(coefficients)


class AffineNormalEquations:
    """
    Streaming accumulator of [Y 1]ᵀ[Y 1] and [Y 1]ᵀΘ.
    Lets the convergence study fit P·M records without holding them all at once.
    """

    def __init__(self, N: int, d: int):
        self.gram = np.zeros((N + 1, N + 1))
        self.cross = np.zeros((N + 1, d))
        self.count = 0

    def add(self, signals, thetas) -> None:
        design = _augment(np.atleast_2d(np.asarray(signals, dtype=np.float64)))
        thetas = np.atleast_2d(np.asarray(thetas, dtype=np.float64))
        self.gram += design.T @ design
        self.cross += design.T @ thetas
        self.count += design.shape[0]

    def solve(self) -> AffineEstimator:
        size = self.gram.shape[0]
        rank = np.linalg.matrix_rank(self.gram)
        if rank < size:
            raise SingularSystemError(
                f"normal equations have rank {rank} but {size} unknowns per output ({self.count} records)"
            )
        coefficients = linalg.solve(self.gram, self.cross, assume_a="pos")
        return _split_coefficients(coefficients)


def asymptotic_affine(Phi, moments: PriorMoments) -> AffineEstimator:
    """A∞ = R_θΦᵀ(ΦR_θΦᵀ + λ_v I)⁻¹,  b∞ = (I − A∞Φ)μ_θ."""
    Phi = np.atleast_2d(np.asarray(Phi, dtype=np.float64))
    n, d = Phi.shape
    if d != moments.mu_theta.size:
        raise InvalidSpecError(f"Phi has {d} columns, prior has dimension {moments.mu_theta.size}")

    phi_r = Phi @ moments.R_theta
    innovation = phi_r @ Phi.T + moments.lambda_v * np.eye(n)
    if moments.lambda_v <= 0:
        rank = np.linalg.matrix_rank(innovation)
        if rank < n:
            raise SingularSystemError(
                f"Phi R Phi^T has rank {rank} < {n} and lambda_v = {moments.lambda_v} does not regularise it"
            )
    try:
        # innovation is symmetric, so solve(S, ΦR)ᵀ = RΦᵀS⁻¹
        A = linalg.solve(innovation, phi_r, assume_a="sym").T
    except linalg.LinAlgError as e:
        raise SingularSystemError(f"Phi R Phi^T + lambda_v I is singular: {e}")
    b = (np.eye(d) - A @ Phi) @ moments.mu_theta
    return AffineEstimator(A, b)


def gaussian_posterior_mean(Phi, moments: PriorMoments, y) -> np.ndarray:
    """E[θ | Y] for θ ~ N(μ, R), Y = Φθ + v, v ~ N(0, λ I), evaluated in information form."""
    Phi = np.atleast_2d(np.asarray(Phi, dtype=np.float64))
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if moments.lambda_v <= 0:
        raise SingularSystemError("information form needs lambda_v > 0")
    try:
        prior_precision = linalg.inv(moments.R_theta)
    except linalg.LinAlgError as e:
        raise SingularSystemError(f"R_theta is singular: {e}")
    precision = prior_precision + Phi.T @ Phi / moments.lambda_v
    information = prior_precision @ moments.mu_theta + Phi.T @ y / moments.lambda_v
    return linalg.solve(precision, information, assume_a="pos")


def affine_objective(estimator: AffineEstimator, signals, thetas) -> float:
    """Σ ‖θ − A Y − b‖² over the rows of (signals, thetas)."""
    residual = np.atleast_2d(thetas) - estimator.predict_batch(signals)
    return float(np.sum(residual ** 2))


def estimator_gap_mse(estimator: AffineEstimator, limit: AffineEstimator, test_signals) -> float:
    signals = [np.asarray(signal, dtype=np.float64).reshape(-1) for signal in test_signals]
    if not signals:
        raise InvalidSpecError("estimator gap needs at least one test signal")
    if estimator.A.shape != limit.A.shape:
        raise InvalidSpecError(f"estimator shapes differ: {estimator.A.shape} vs {limit.A.shape}")
    stacked = np.stack(signals)
    if stacked.shape[1] != estimator.N:
        raise InvalidSpecError(f"test signals have length {stacked.shape[1]}, estimator expects {estimator.N}")
    gap = stacked @ (estimator.A - limit.A).T + (estimator.b - limit.b)
    return float(np.mean(np.sum(gap ** 2, axis=1)))


def prior_moments(prior: PriorSpec, lambda_v: float) -> PriorMoments:
    if len(prior.components) != 1 or not isinstance(prior.components[0], GaussianPrior):
        raise InvalidSpecError("the linear lab works with a single joint Gaussian prior")
    component = prior.components[0]
    return PriorMoments(component.mean(), component.covariance, lambda_v)


def fit_streaming(model_spec: FirModelSpec, prior: PriorSpec, P: int, M: int, seed: int) -> AffineEstimator:
    """Same records as generate_dataset(model_spec, prior, P, M, seed), fitted without storing them."""
    u = generate_input(model_spec.input)
    thetas = sample_prior(prior, P, seed)
    equations = AffineNormalEquations(model_spec.length, model_spec.theta_dim)
    for p, theta in enumerate(thetas):
        block = np.stack([
            simulate_fir(theta, u, model_spec.noise_std, derive_seed(seed, STREAM_RECORD, p, m)) for m in range(M)
        ])
        equations.add(block, np.tile(theta.values, (M, 1)))
    return equations.solve()


def convergence_test_signals(model_spec: FirModelSpec, prior: PriorSpec, n_test: int, test_seed: int,
                             test_draw: str = TEST_DRAW_THETA_0,
                             theta_0: Optional[Sequence[float]] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Signals the gap is measured on, with the parameter behind each one.
    By default all n_test signals share the true θ0; test_draw="prior" gives each its own prior draw.
    """
    if test_draw == TEST_DRAW_THETA_0:
        test = build_test_set(model_spec, theta_0, n_test, test_seed)
        return np.tile(test.theta_0.values, (len(test), 1)), test.signals
    if test_draw == TEST_DRAW_PRIOR:
        u = generate_input(model_spec.input)
        thetas = sample_prior(prior, n_test, derive_seed(test_seed, STREAM_TEST))
        signals = np.stack([
            simulate_fir(theta, u, model_spec.noise_std, derive_seed(test_seed, STREAM_TEST, k))
            for k, theta in enumerate(thetas)
        ])
        return np.stack([theta.values for theta in thetas]), signals
    raise InvalidSpecError(f"test_draw must be one of {TEST_DRAWS}, got {test_draw!r}")


def run_convergence_study(model_spec: FirModelSpec, prior: PriorSpec, P_values: Sequence[int],
                          M_values: Sequence[int], seeds: Iterable[int], n_test: int = 100,
                          test_seed: Optional[int] = None, progress: bool = False,
                          test_draw: str = TEST_DRAW_THETA_0,
                          theta_0: Optional[Sequence[float]] = None) -> pd.DataFrame:
    """
    Seed-averaged gap between the fitted and the asymptotic affine estimator on a P × M grid.
    Rows are indexed by P, columns by M. The gap is measured on n_test signals at θ0 unless
    test_draw="prior".
    """
    seeds = list(seeds)
    if not seeds or not P_values or not M_values:
        raise InvalidSpecError("convergence study needs at least one P, one M and one seed")

    u = generate_input(model_spec.input)
    Phi = build_fir_regressor(u, model_spec.order)
    limit = asymptotic_affine(Phi, prior_moments(prior, model_spec.noise_std ** 2))

    test_seed = seeds[0] if test_seed is None else test_seed
    _, test_signals = convergence_test_signals(model_spec, prior, n_test, test_seed, test_draw, theta_0)

    cells = [(P, M, seed) for P in P_values for M in M_values for seed in seeds]
    rows = []
    for P, M, seed in tqdm(cells, desc="linear lab", disable=not progress):
        estimator = fit_streaming(model_spec, prior, P, M, seed)
        gap = estimator_gap_mse(estimator, limit, test_signals)
        logger.debug("P=%d M=%d seed=%d gap=%.3e", P, M, seed, gap)
        rows.append({"P": P, "M": M, "seed": seed, "gap_mse": gap})

    frame = pd.DataFrame(rows)
    table = frame.pivot_table(index="P", columns="M", values="gap_mse", aggfunc="mean")
    logger.info("Convergence study finished: %d cells x %d seeds", table.size, len(seeds))
    return table

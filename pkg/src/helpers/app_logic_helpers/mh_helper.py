"""
Conditional-mean estimation by Metropolis-Hastings.

Each bounded component θ_i ∈ (a_i, b_i) is mapped to φ_i = log((θ_i − a_i)/(b_i − θ_i)); the
chain is a Gaussian random walk in φ and the acceptance ratio carries the log-Jacobian of the
inverse map. With a uniform prior on the box the target is the posterior of θ given y.
"""

from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.special import expit
from scipy.stats import norm
from tqdm import tqdm

from config.defaults import PILOT_ROUNDS, PILOT_STEPS, TARGET_ACCEPTANCE
from exceptions.deepbayes_exceptions.exceptions import DeepBayesError, DomainError, InvalidSpecError
from helpers.app_logic_helpers.smc_helper import make_pf_loglik
from helpers.common_helper.common_helper import fingerprint
from helpers.common_helper.logger_helper import LoggerHelper
from helpers.common_helper.rng_helper import STREAM_MH, STREAM_PF, derive_seed, make_rng
from models.filter_config import PfConfig
from models.mh_config import MarkovChain, MhConfig
from models.prior_spec import PriorSpec

logger = LoggerHelper(__name__).get_logger()

LogLik = Callable[[np.ndarray], float]


def _bounds_array(bounds) -> Tuple[np.ndarray, np.ndarray]:
    bounds = np.asarray(bounds, dtype=np.float64).reshape(-1, 2)
    return bounds[:, 0], bounds[:, 1]


def to_unconstrained(theta, bounds) -> np.ndarray:
    theta = np.asarray(theta, dtype=np.float64).reshape(-1)
    lower, upper = _bounds_array(bounds)
    if theta.size != lower.size:
        raise DomainError(f"theta has {theta.size} components, bounds have {lower.size}")
    outside = ~((lower < theta) & (theta < upper))
    if np.any(outside):
        raise DomainError(f"components {np.flatnonzero(outside).tolist()} of {theta.tolist()} are not strictly inside the bounds")
    return np.log(theta - lower) - np.log(upper - theta)


def from_unconstrained(phi, bounds) -> np.ndarray:
    phi = np.asarray(phi, dtype=np.float64).reshape(-1)
    lower, upper = _bounds_array(bounds)
    return lower + (upper - lower) * expit(phi)


def log_jacobian(phi, bounds) -> float:
    """log |dθ/dφ| summed over components."""
    phi = np.asarray(phi, dtype=np.float64).reshape(-1)
    lower, upper = _bounds_array(bounds)
    return float(np.sum(np.log(upper - lower) - np.logaddexp(0.0, phi) - np.logaddexp(0.0, -phi)))


def log_accept_ratio(loglik_new: float, loglik_old: float, phi_new, phi_old) -> float:
    phi_new = np.asarray(phi_new, dtype=np.float64).reshape(-1)
    phi_old = np.asarray(phi_old, dtype=np.float64).reshape(-1)
    # log((e^φ + 1)/(e^φ' + 1)) without overflow
    jacobian = np.sum((phi_new - phi_old) + 2.0 * (np.logaddexp(0.0, phi_old) - np.logaddexp(0.0, phi_new)))
    return float((loglik_new - loglik_old) + jacobian)


def _safe_loglik(loglik: LogLik, theta: np.ndarray, step: int) -> Optional[float]:
    try:
        value = float(loglik(theta))
    except DeepBayesError as e:
        logger.debug("log-likelihood failed at step %d (%s): %s", step, e.category, e)
        return None
    if not np.isfinite(value):
        logger.debug("log-likelihood is %s at step %d", value, step)
        return None
    return value


def run_chain(cfg: MhConfig, loglik: LogLik, progress: bool = False) -> Tuple[MarkovChain, np.ndarray]:
    """Random-walk MH in φ-space. Returns the chain and the mean of its post-burn-in draws."""
    rng = make_rng(cfg.seed, STREAM_MH)
    chol = np.linalg.cholesky(cfg.proposal_cov)
    total, d = cfg.length, cfg.d

    theta = cfg.theta_init.copy()
    phi = to_unconstrained(theta, cfg.bounds)
    current = _safe_loglik(loglik, theta, 1)
    if current is None:
        raise DomainError(f"log-likelihood is not finite at the initial point {theta.tolist()}")

    draws = np.empty((total, d))
    proposals = np.empty((total, d))
    accepted = np.zeros(total, dtype=bool)
    trace = np.empty(total)
    draws[0], proposals[0], accepted[0], trace[0] = theta, theta, True, current
    failure_steps: List[int] = []

    for t in tqdm(range(1, total), desc="mh", disable=not progress):
        phi_new = phi + chol @ rng.standard_normal(d)
        theta_new = from_unconstrained(phi_new, cfg.bounds)
        proposals[t] = theta_new
        log_u = np.log(rng.uniform())

        if cfg.recompute_current:
            refreshed = _safe_loglik(loglik, theta, t + 1)
            if refreshed is not None:
                current = refreshed

        inside = np.all((cfg.bounds[:, 0] < theta_new) & (theta_new < cfg.bounds[:, 1]))
        candidate = _safe_loglik(loglik, theta_new, t + 1) if inside else None
        if candidate is None:
            failure_steps.append(t + 1)
        elif log_accept_ratio(candidate, current, phi_new, phi) > log_u:
            theta, phi, current = theta_new, phi_new, candidate
            accepted[t] = True

        draws[t] = theta
        trace[t] = current

    if failure_steps:
        logger.warning("%d of %d proposals could not be scored and were rejected", len(failure_steps), total - 1)
    chain = MarkovChain(draws, proposals, accepted, trace, cfg.T_burn_in, len(failure_steps), failure_steps)
    logger.info("Chain finished: acceptance %.3f over %d steps", chain.acceptance_rate, total - 1)
    return chain, chain.estimate()


def tune_proposal_scale(cfg: MhConfig, loglik: LogLik, target: float = TARGET_ACCEPTANCE,
                        pilot_steps: int = PILOT_STEPS, rounds: int = PILOT_ROUNDS) -> Tuple[MhConfig, List[float]]:
    """
    Short pilot chains rescale the proposal covariance toward the target acceptance rate.
    Each round continues from the last pilot state; the scale follows the ratio of normal
    quantiles at half the target and half the observed rate.
    """
    if not 0 < target < 1:
        raise InvalidSpecError(f"target acceptance must lie in (0, 1), got {target}")
    pilot = cfg.replace(T_burn_in=0, T_reqd=pilot_steps)
    rates = []
    for round_index in range(rounds):
        pilot = pilot.replace(seed=derive_seed(cfg.seed, STREAM_MH, round_index))
        chain, _ = run_chain(pilot, loglik)
        rate = float(np.clip(chain.acceptance_rate, 0.01, 0.99))
        rates.append(chain.acceptance_rate)
        factor = norm.ppf(target / 2.0) / norm.ppf(rate / 2.0)
        pilot = pilot.replace(proposal_cov=pilot.proposal_cov * factor ** 2, theta_init=chain.theta_draws[-1])
        logger.debug("pilot round %d: acceptance %.3f, scale factor %.3f", round_index + 1, rates[-1], factor)
    tuned = cfg.replace(proposal_cov=pilot.proposal_cov)
    logger.info("Tuned proposal after %d pilot round(s); last acceptance %.3f", rounds, rates[-1] if rates else float("nan"))
    return tuned, rates


def cme_estimate(chains: Sequence[MarkovChain]) -> np.ndarray:
    """Average of the per-chain post-burn-in means."""
    if not chains:
        raise InvalidSpecError("need at least one completed chain")
    return np.mean([chain.estimate() for chain in chains], axis=0)


def estimate_signal_cme(model_spec, prior: PriorSpec, y, pf_cfg: PfConfig, seed: int, n_chains: int = 1,
                        T_burn_in: int = None, T_reqd: int = None, theta_init=None, proposal_cov=None,
                        tune: bool = True, recompute_current: bool = False,
                        progress: bool = False) -> Tuple[np.ndarray, List[MarkovChain]]:
    """CME of θ for one growth-model signal: n_chains PF-driven chains on the prior box, pooled."""
    bounds = prior.bounds()
    if bounds is None:
        raise InvalidSpecError("MH needs a prior with bounded support on every component")
    chains = []
    for index in range(n_chains):
        pf = PfConfig({**pf_cfg.to_dict(), "seed": derive_seed(seed, STREAM_PF, index)})
        loglik = make_pf_loglik(model_spec, y, pf)
        options = {"theta_init": theta_init, "proposal_cov": proposal_cov, "seed": derive_seed(seed, STREAM_MH, index),
                   "recompute_current": recompute_current}
        if T_burn_in is not None:
            options["T_burn_in"] = T_burn_in
        if T_reqd is not None:
            options["T_reqd"] = T_reqd
        cfg = MhConfig(bounds, **options)
        if tune:
            cfg, _ = tune_proposal_scale(cfg, loglik)
        chain, _ = run_chain(cfg, loglik, progress=progress)
        chains.append(chain)
    return cme_estimate(chains), chains


def chain_frame(chain: MarkovChain) -> pd.DataFrame:
    """Chain dump: step, θ components, log-likelihood, acceptance and burn-in marker."""
    frame = pd.DataFrame(chain.theta_draws, columns=[f"theta_{i + 1}" for i in range(chain.theta_draws.shape[1])])
    frame.insert(0, "t", np.arange(1, len(chain) + 1))
    frame["log_lik"] = chain.log_lik
    frame["accepted"] = chain.accept_flags
    frame["burn_in"] = frame["t"] <= chain.burn_in
    return frame


def cme_estimator(model_spec, prior: PriorSpec, pf_cfg: PfConfig, seed: int, **options) -> Callable[[np.ndarray], np.ndarray]:
    """y ↦ CME estimate. Chain streams are keyed by the signal content so results do not depend on call order."""

    def estimator(y) -> np.ndarray:
        y = np.asarray(y, dtype=np.float64).reshape(-1)
        signal_seed = derive_seed(seed, int(fingerprint(y.tolist()), 16))
        theta_hat, _ = estimate_signal_cme(model_spec, prior, y, pf_cfg, signal_seed, **options)
        return theta_hat

    return estimator

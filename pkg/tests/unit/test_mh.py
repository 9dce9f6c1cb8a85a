import numpy as np
import pytest
from scipy.stats import norm

from exceptions.deepbayes_exceptions.exceptions import DegenerateFilterError, DomainError, InvalidSpecError
from helpers.app_logic_helpers.mh_helper import (
    chain_frame,
    cme_estimate,
    from_unconstrained,
    log_accept_ratio,
    log_jacobian,
    run_chain,
    to_unconstrained,
    tune_proposal_scale,
)
from models.mh_config import MarkovChain, MhConfig

UNIT = [(0.0, 1.0)]


@pytest.fixture(scope="module")
def gaussian_observations():
    return 0.5 + 0.1 * np.random.default_rng(12).standard_normal(20)


def _gaussian_loglik(observations):
    def loglik(theta) -> float:
        return float(np.sum(norm.logpdf(observations, theta[0], 0.1)))
    return loglik


def _constant_chain(value, length=5, burn_in=0) -> MarkovChain:
    draws = np.tile(np.asarray(value, dtype=float), (length, 1))
    return MarkovChain(draws, draws, np.ones(length, dtype=bool), np.zeros(length), burn_in)


class TestTransform:

    def test_midpoint_maps_to_zero(self):
        assert to_unconstrained([0.5], UNIT)[0] == 0.0
        np.testing.assert_allclose(to_unconstrained([2.0, -1.0], [(1.0, 3.0), (-4.0, 2.0)]), [0.0, 0.0], atol=1e-15)

    def test_on_the_bound(self):
        with pytest.raises(DomainError):
            to_unconstrained([1.0], UNIT)

    def test_inverse_values(self):
        assert from_unconstrained([0.0], UNIT)[0] == 0.5
        assert from_unconstrained([np.log(9.0)], UNIT)[0] == pytest.approx(0.9, abs=1e-15)
        assert from_unconstrained([50.0], [(2.0, 5.0)])[0] == pytest.approx(5.0)

    def test_inverse_of_forward(self):
        bounds = [(0.1, 1.5), (1e-3, 1.0)]
        theta = np.array([0.4, 0.02])
        np.testing.assert_allclose(from_unconstrained(to_unconstrained(theta, bounds), bounds), theta, atol=1e-14)

    @pytest.mark.parametrize("phi", [-3.0, 0.0, 0.7, 4.0])
    def test_log_jacobian_matches_numeric_derivative(self, phi):
        bounds = [(0.1, 1.5)]
        step = 1e-6
        derivative = (from_unconstrained([phi + step], bounds) - from_unconstrained([phi - step], bounds))[0] / (2 * step)
        assert log_jacobian([phi], bounds) == pytest.approx(np.log(derivative), abs=1e-6)

    def test_ratio_without_move(self):
        phi = np.array([0.3, -1.2])
        assert log_accept_ratio(-4.0, -4.0, phi, phi) == 0.0
        assert log_accept_ratio(-1.5, -4.0, phi, phi) == pytest.approx(2.5)

    def test_ratio_carries_jacobian_difference(self):
        bounds = [(0.0, 1.0), (0.0, 1.0)]
        old, new = np.array([0.2, -0.5]), np.array([1.1, 0.4])
        expected = log_jacobian(new, bounds) - log_jacobian(old, bounds)
        assert log_accept_ratio(0.0, 0.0, new, old) == pytest.approx(expected, abs=1e-12)


class TestRunChain:

    def test_constant_likelihood_accepts_jacobian_gains(self):
        bounds = [(0.0, 1.0), (2.0, 3.0)]
        chain, _ = run_chain(MhConfig(bounds, T_burn_in=0, T_reqd=400, seed=1), lambda theta: 0.0)
        for t in range(1, len(chain)):
            phi_old = to_unconstrained(chain.theta_draws[t - 1], bounds)
            phi_new = to_unconstrained(chain.proposals[t], bounds)
            if log_accept_ratio(0.0, 0.0, phi_new, phi_old) >= 0.0:
                assert chain.accept_flags[t]

    def test_posterior_mean_matches_quadrature(self, gaussian_observations):
        loglik = _gaussian_loglik(gaussian_observations)
        grid = (np.arange(10_000) + 0.5) / 10_000
        log_post = np.array([loglik([value]) for value in grid])
        weights = np.exp(log_post - log_post.max())
        quadrature_mean = float(np.sum(grid * weights) / np.sum(weights))

        cfg = MhConfig(UNIT, proposal_cov=[[0.3 ** 2]], T_burn_in=1000, T_reqd=20_000, seed=3)
        chain, estimate = run_chain(cfg, loglik)
        assert estimate[0] == pytest.approx(quadrature_mean, abs=0.01)
        assert 0.05 < chain.acceptance_rate < 0.95

    def test_same_seed_same_chain(self):
        cfg = MhConfig(UNIT, T_burn_in=5, T_reqd=50, seed=8)
        first, _ = run_chain(cfg, lambda theta: -theta[0] ** 2)
        second, _ = run_chain(cfg, lambda theta: -theta[0] ** 2)
        np.testing.assert_array_equal(first.theta_draws, second.theta_draws)

    def test_failed_evaluations_are_rejections(self):
        def loglik(theta) -> float:
            if theta[0] > 0.6:
                raise DegenerateFilterError("all particle weights vanished", step=3)
            return 0.0

        cfg = MhConfig(UNIT, theta_init=[0.5], proposal_cov=[[1.0]], T_burn_in=0, T_reqd=300, seed=2)
        chain, _ = run_chain(cfg, loglik)
        assert chain.failures > 0
        assert chain.failures == len(chain.failure_steps)
        assert np.all(chain.theta_draws <= 0.6)

    def test_initial_point_must_score(self):
        with pytest.raises(DomainError):
            run_chain(MhConfig(UNIT, T_reqd=10), lambda theta: -np.inf)

    def test_chain_layout(self):
        cfg = MhConfig(UNIT, T_burn_in=3, T_reqd=7, seed=0)
        chain, estimate = run_chain(cfg, lambda theta: 0.0)
        assert len(chain) == 10
        assert chain.accept_flags[0]
        np.testing.assert_allclose(estimate, chain.theta_draws[3:].mean(axis=0))

        frame = chain_frame(chain)
        assert list(frame.columns) == ["t", "theta_1", "log_lik", "accepted", "burn_in"]
        assert frame["burn_in"].sum() == 3


class TestTuning:

    def test_small_steps_are_widened(self, gaussian_observations):
        loglik = _gaussian_loglik(gaussian_observations)
        cfg = MhConfig(UNIT, proposal_cov=[[1e-6]], T_burn_in=0, T_reqd=10, seed=4)
        tuned, rates = tune_proposal_scale(cfg, loglik, target=0.3, pilot_steps=100, rounds=2)
        assert len(rates) == 2
        assert rates[0] > 0.9
        assert tuned.proposal_cov[0, 0] > 1e-6
        assert tuned.T_reqd == 10

    def test_target_outside_unit_interval(self):
        with pytest.raises(InvalidSpecError):
            tune_proposal_scale(MhConfig(UNIT), lambda theta: 0.0, target=1.5)


class TestCmeEstimate:

    def test_single_chain(self):
        chain, estimate = run_chain(MhConfig(UNIT, T_burn_in=2, T_reqd=20, seed=5), lambda theta: 0.0)
        np.testing.assert_array_equal(cme_estimate([chain]), estimate)

    def test_constant_chain(self):
        np.testing.assert_array_equal(cme_estimate([_constant_chain([0.3, 0.7])]), [0.3, 0.7])

    def test_two_chains_are_averaged(self):
        pooled = cme_estimate([_constant_chain([0.2]), _constant_chain([0.6])])
        np.testing.assert_allclose(pooled, [0.4])

    def test_no_chains(self):
        with pytest.raises(InvalidSpecError):
            cme_estimate([])


class TestMhConfig:

    def test_initial_point_outside_box(self):
        with pytest.raises(InvalidSpecError):
            MhConfig(UNIT, theta_init=[1.2])

    def test_defaults(self):
        cfg = MhConfig([(0.1, 1.5), (1e-3, 1.0)])
        np.testing.assert_allclose(cfg.theta_init, [0.8, 0.5005])
        np.testing.assert_allclose(cfg.proposal_cov, 0.01 * np.eye(2))
        assert cfg.length == 10_000

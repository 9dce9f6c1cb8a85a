import numpy as np
import pytest

from exceptions.deepbayes_exceptions.exceptions import InvalidParameterError, InvalidSpecError
from helpers.app_logic_helpers.simulation_helper import (
    build_fir_regressor,
    generate_input,
    simulate_fir,
    simulate_growth,
)
from models.input_signal import InputSignal
from models.model_spec import FirModelSpec, GrowthModelSpec, WienerModelSpec, model_spec_from_dict
from models.prior_spec import GaussianPrior, PriorSpec, UniformPrior
from models.theta_vector import ThetaVector


def _quiet_growth(variant: str, length: int = 5) -> GrowthModelSpec:
    return GrowthModelSpec({"variant": variant, "length": length})


class TestThetaVector:

    def test_masked_component_must_be_positive(self):
        with pytest.raises(InvalidSpecError):
            ThetaVector([1.0, 0.0], [False, True])

    def test_unmasked_component_may_be_zero(self):
        theta = ThetaVector([0.0, 0.5], [False, True])
        assert len(theta) == 2
        assert theta.tolist() == [0.0, 0.5]

    def test_non_finite_rejected(self):
        with pytest.raises(InvalidSpecError):
            ThetaVector([np.nan])

    def test_mask_length_must_match(self):
        with pytest.raises(InvalidSpecError):
            ThetaVector([1.0, 2.0], [True])


class TestGenerateInput:

    def test_cosine_first_sample(self):
        u = generate_input(InputSignal({"kind": "cosine_1p2", "length": 1}))
        np.testing.assert_allclose(u, [0.362358], atol=1e-6)

    def test_uniform_support(self):
        u = generate_input(InputSignal({"kind": "uniform01", "length": 1000, "seed": 3}))
        assert u.shape == (1000,)
        assert np.all((u >= 0.0) & (u <= 1.0))

    def test_prbs_blocks(self):
        u = generate_input(InputSignal({"kind": "prbs", "length": 10, "amplitude": 0.5, "hold": 5, "seed": 1}))
        assert np.all(np.abs(u) == 0.5)
        assert np.all(u[:5] == u[0])
        assert np.all(u[5:] == u[5])

    def test_same_seed_same_input(self):
        spec = InputSignal({"kind": "prbs", "length": 40, "hold": 4, "seed": 9})
        np.testing.assert_array_equal(generate_input(spec), generate_input(spec))

    @pytest.mark.parametrize("data", [
        {"kind": "cosine_1p2", "length": 0},
        {"kind": "prbs", "length": 10, "hold": 0},
        {"kind": "sawtooth", "length": 10},
    ])
    def test_invalid_input_specs(self, data):
        with pytest.raises(InvalidSpecError):
            InputSignal(data)


class TestFir:

    def test_regressor_shift_pattern(self):
        np.testing.assert_array_equal(build_fir_regressor([1.0, 2.0, 3.0], 2), [[1, 0], [2, 1], [3, 2]])

    def test_regressor_order_one_is_the_input(self):
        u = np.array([0.3, -1.0, 2.5])
        np.testing.assert_array_equal(build_fir_regressor(u, 1)[:, 0], u)

    def test_regressor_last_row(self):
        u = np.array([1.0, 2.0, 3.0, 4.0])
        np.testing.assert_array_equal(build_fir_regressor(u, 3)[3], [4.0, 3.0, 2.0])

    def test_impulse_response(self):
        np.testing.assert_allclose(simulate_fir([0.7, 0.7], [1.0, 0.0, 0.0], 0.0, seed=0), [0.7, 0.7, 0.0])

    def test_zero_parameters_give_zero_output(self):
        y = simulate_fir([0.0, 0.0], np.linspace(-1, 1, 7), 0.0, seed=0)
        np.testing.assert_array_equal(y, np.zeros(7))

    def test_step_response(self):
        np.testing.assert_allclose(simulate_fir([1.0, 2.0], [1.0, 1.0, 1.0], 0.0, seed=0), [1.0, 3.0, 3.0])

    def test_order_longer_than_signal(self):
        with pytest.raises(InvalidSpecError):
            simulate_fir([1.0, 1.0, 1.0], [1.0, 1.0], 0.0, seed=0)

    def test_determinism(self):
        u = np.linspace(0, 1, 20)
        np.testing.assert_array_equal(simulate_fir([0.7, 0.7], u, 0.3, 5), simulate_fir([0.7, 0.7], u, 0.3, 5))


class TestGrowth:

    def test_m1_noise_free_recursion(self):
        spec = _quiet_growth("M1")
        y, x = simulate_growth(spec, [0.0, 0.0], seed=0)
        assert y[0] == 0.0
        assert x.shape == (6,)
        assert x[1] == pytest.approx(8.0 * np.cos(1.2), abs=1e-6)
        assert x[1] == pytest.approx(2.898862, abs=1e-6)
        assert y[1] == pytest.approx(8.4034, abs=1e-4)

    def test_m2_noise_free_recursion(self):
        spec = _quiet_growth("M2")
        y, x = simulate_growth(spec, [0.7, 1.0, 0.0, 0.0], seed=0)
        assert x[1] == pytest.approx(0.362358, abs=1e-6)
        assert y[1] == pytest.approx(0.131303, abs=1e-6)

    def test_negative_variance(self):
        with pytest.raises(InvalidParameterError):
            simulate_growth(_quiet_growth("M1"), [-1.0, 0.1], seed=0)

    def test_assemble_writes_free_over_fixed(self):
        spec = _quiet_growth("M1")
        full = spec.assemble([0.4, 0.2])
        np.testing.assert_array_equal(full, [0.5, 25.0, 1.0, 1.0, 8.0, 1.0, 0.4, 0.2])

    def test_named_variant_rejects_other_free_set(self):
        with pytest.raises(InvalidSpecError):
            GrowthModelSpec({"variant": "M1", "length": 5, "free": [2, 7, 8]})

    def test_generic_variant_needs_every_index(self):
        with pytest.raises(InvalidSpecError):
            GrowthModelSpec({"variant": "generic", "length": 5, "fixed": {"1": 0.5}, "free": [7, 8]})

    def test_variance_mask(self):
        assert _quiet_growth("M2").variance_mask == [False, False, True, True]


class TestModelSpecs:

    def test_family_dispatch(self):
        assert isinstance(model_spec_from_dict({"family": "fir"}), FirModelSpec)
        assert isinstance(model_spec_from_dict({"family": "growth"}), GrowthModelSpec)
        assert isinstance(model_spec_from_dict({"family": "wiener"}), WienerModelSpec)

    def test_unknown_family(self):
        with pytest.raises(InvalidSpecError):
            model_spec_from_dict({"family": "arx"})

    def test_fir_defaults(self):
        spec = FirModelSpec({})
        assert (spec.order, spec.length, spec.noise_std) == (2, 500, 0.3)

    def test_round_trip(self):
        spec = GrowthModelSpec({"variant": "M2", "length": 12})
        again = model_spec_from_dict(spec.to_dict())
        assert again.to_dict() == spec.to_dict()


class TestPriorSpec:

    def test_uniform_needs_a_below_b(self):
        with pytest.raises(InvalidSpecError):
            UniformPrior(1.0, 1.0)

    def test_variance_prior_lower_edge(self):
        with pytest.raises(InvalidSpecError):
            UniformPrior(0.0, 1.0, positive=True)

    def test_gaussian_rejects_indefinite_covariance(self):
        with pytest.raises(InvalidSpecError):
            GaussianPrior([0.0, 0.0], [[1.0, 2.0], [2.0, 1.0]])

    def test_bounds_only_for_all_uniform(self):
        box = PriorSpec.uniform_box([(0.1, 1.5), (1e-3, 1.0)], [True, True])
        assert box.bounds() == [(0.1, 1.5), (1e-3, 1.0)]
        mixed = PriorSpec([UniformPrior(0.0, 1.0), GaussianPrior([0.0], [[1.0]])])
        assert mixed.bounds() is None

    def test_mean_and_contains(self):
        prior = PriorSpec([UniformPrior(0.0, 2.0), GaussianPrior([5.0, 6.0], np.eye(2))])
        np.testing.assert_array_equal(prior.mean(), [1.0, 5.0, 6.0])
        assert prior.dim == 3
        assert prior.contains([1.5, -100.0, 100.0])
        assert not prior.contains([2.5, 0.0, 0.0])

    def test_from_dict_round_trip(self):
        prior = PriorSpec([UniformPrior(0.1, 1.5, True), GaussianPrior([1.0, 1.0], np.eye(2) / 3.0)])
        again = PriorSpec.from_dict(prior.to_dict())
        assert again.to_dict() == prior.to_dict()

    def test_unknown_kind(self):
        with pytest.raises(InvalidSpecError):
            PriorSpec.from_dict({"components": [{"kind": "beta", "a": 1, "b": 2}]})

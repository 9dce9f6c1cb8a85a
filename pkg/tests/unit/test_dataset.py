import hashlib
import json

import numpy as np
import pytest

from exceptions.deepbayes_exceptions.exceptions import DatasetFormatError, InvalidSpecError
from helpers.app_logic_helpers.dataset_helper import (
    default_prior,
    generate_dataset,
    regenerate,
    sample_prior,
    split_dataset,
)
from helpers.storage_helpers.dataset_store_helper import read_dataset, write_dataset
from models.model_spec import FirModelSpec, GrowthModelSpec
from models.prior_spec import GaussianPrior, PriorSpec, UniformPrior
from models.signal_record import SignalRecord
from models.synthetic_dataset import SyntheticDataset
from models.theta_vector import ThetaVector


@pytest.fixture
def fir_spec():
    return FirModelSpec({"order": 2, "input": {"kind": "uniform01", "length": 10, "seed": 4}})


@pytest.fixture
def small_dataset(fir_spec):
    return generate_dataset(fir_spec, default_prior(fir_spec), P=2, M=3, seed=11)


class TestSamplePrior:

    def test_uniform_box_draws_stay_inside(self):
        prior = PriorSpec.uniform_box([(0.1, 1.5), (1e-3, 1.0)], [True, True])
        draws = np.array([theta.values for theta in sample_prior(prior, 1000, seed=0)])
        assert draws.shape == (1000, 2)
        assert np.all((draws[:, 0] >= 0.1) & (draws[:, 0] <= 1.5))
        assert np.all((draws[:, 1] >= 1e-3) & (draws[:, 1] <= 1.0))

    def test_collapsed_uniform(self):
        prior = PriorSpec([UniformPrior(0.3, 0.3 + 1e-12)])
        draws = np.array([theta.values[0] for theta in sample_prior(prior, 50, seed=1)])
        np.testing.assert_allclose(draws, 0.3, atol=1e-11)

    def test_gaussian_sample_mean(self):
        P = 100_000
        prior = PriorSpec([GaussianPrior([1.0, 1.0], np.eye(2) / 3.0)])
        draws = np.array([theta.values for theta in sample_prior(prior, P, seed=2)])
        tolerance = 4.0 * np.sqrt(1.0 / 3.0) / np.sqrt(P)
        np.testing.assert_allclose(draws.mean(axis=0), [1.0, 1.0], atol=tolerance)

    def test_non_positive_count(self):
        with pytest.raises(InvalidSpecError):
            sample_prior(PriorSpec([UniformPrior(0.0, 1.0)]), 0, seed=0)


class TestGenerateDataset:

    def test_cardinality(self, small_dataset):
        assert len(small_dataset) == 6
        per_p = [sum(1 for record in small_dataset.records if record.p == p) for p in range(2)]
        assert per_p == [3, 3]
        assert small_dataset.signals().shape == (6, 10)
        assert small_dataset.thetas().shape == (6, 2)

    def test_replicates_share_theta_not_noise(self, small_dataset):
        first, second = small_dataset.records[0], small_dataset.records[1]
        assert first.theta == second.theta
        assert not np.array_equal(first.y, second.y)

    def test_regenerate_from_header(self, small_dataset):
        again = regenerate(small_dataset.header)
        assert again.records == small_dataset.records

    def test_thread_count_does_not_change_records(self, fir_spec):
        prior = default_prior(fir_spec)
        serial = generate_dataset(fir_spec, prior, P=3, M=2, seed=5, threads=1)
        threaded = generate_dataset(fir_spec, prior, P=3, M=2, seed=5, threads=4)
        assert serial.records == threaded.records

    def test_prior_dimension_must_match_model(self, fir_spec):
        with pytest.raises(InvalidSpecError):
            generate_dataset(fir_spec, PriorSpec([UniformPrior(0.0, 1.0)]), P=1, M=1, seed=0)

    def test_growth_default_prior_box(self):
        spec = GrowthModelSpec({"variant": "M1", "length": 8})
        prior = default_prior(spec)
        assert prior.bounds() == [(0.1, 1.5), (1e-3, 1.0)]
        dataset = generate_dataset(spec, prior, P=2, M=2, seed=3)
        assert np.all(np.isfinite(dataset.signals()))

    def test_theta_outside_prior_support(self):
        spec = GrowthModelSpec({"variant": "M1", "length": 8})
        dataset = generate_dataset(spec, default_prior(spec), P=2, M=1, seed=3)
        first = dataset.records[0]
        outside = ThetaVector([5.0, first.theta.values[1]], first.theta.positivity_mask)
        records = [SignalRecord(first.p, first.m, outside, first.y, first.seed)] + dataset.records[1:]
        with pytest.raises(InvalidSpecError, match="outside the prior support"):
            SyntheticDataset(dataset.header, records)


class TestSplit:

    def test_three_to_one(self, fir_spec):
        dataset = generate_dataset(fir_spec, default_prior(fir_spec), P=25, M=4, seed=1)
        train, validation = split_dataset(dataset, 0.75, seed=7)
        assert (len(train), len(validation)) == (75, 25)
        keys = {(r.p, r.m) for r in train.records} | {(r.p, r.m) for r in validation.records}
        assert len(keys) == 100
        assert train.header.role == "train"
        assert validation.header.split["ratio"] == 0.75

    def test_half_of_two(self, fir_spec):
        dataset = generate_dataset(fir_spec, default_prior(fir_spec), P=1, M=2, seed=1)
        train, validation = split_dataset(dataset, 0.5, seed=0)
        assert (len(train), len(validation)) == (1, 1)

    def test_split_is_seeded(self, small_dataset):
        first, _ = split_dataset(small_dataset, 0.5, seed=3)
        second, _ = split_dataset(small_dataset, 0.5, seed=3)
        assert first.records == second.records

    @pytest.mark.parametrize("ratio", [0.0, 1.0, 0.01])
    def test_empty_side(self, small_dataset, ratio):
        with pytest.raises(InvalidSpecError):
            split_dataset(small_dataset, ratio, seed=0)


class TestDatasetStore:

    def test_round_trip(self, small_dataset, tmp_path):
        path = str(tmp_path / "dataset.jsonl")
        write_dataset(small_dataset, path)
        loaded = read_dataset(path)
        assert loaded.header.to_dict() == small_dataset.header.to_dict()
        assert loaded.records == small_dataset.records

    def test_same_header_same_bytes(self, small_dataset, tmp_path):
        first, second = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        digest = write_dataset(small_dataset, str(first))
        write_dataset(regenerate(small_dataset.header), str(second))
        assert first.read_bytes() == second.read_bytes()
        assert len(digest) == 64

    def test_corrupted_length_field(self, small_dataset, tmp_path):
        path = tmp_path / "dataset.jsonl"
        write_dataset(small_dataset, str(path))
        lines = path.read_text(encoding="utf-8").splitlines(keepends=True)
        lines[1] = lines[1].replace('"n":10,', '"n":11,', 1)
        path.write_text("".join(lines), encoding="utf-8")

        with pytest.raises(DatasetFormatError) as error:
            read_dataset(str(path))
        assert error.value.line == 2
        assert error.value.offset == len(lines[0].encode("utf-8"))

    def test_missing_trailer(self, small_dataset, tmp_path):
        path = tmp_path / "dataset.jsonl"
        write_dataset(small_dataset, str(path))
        lines = path.read_text(encoding="utf-8").splitlines(keepends=True)
        path.write_text("".join(lines[:-1]), encoding="utf-8")
        with pytest.raises(DatasetFormatError, match="trailer"):
            read_dataset(str(path))

    def test_flipped_sample_fails_checksum(self, small_dataset, tmp_path):
        path = tmp_path / "dataset.jsonl"
        write_dataset(small_dataset, str(path))
        lines = path.read_text(encoding="utf-8").splitlines(keepends=True)
        record = json.loads(lines[2])
        record["y"][0] += 1.0
        lines[2] = json.dumps(record, separators=(",", ":")) + "\n"
        path.write_text("".join(lines), encoding="utf-8")
        with pytest.raises(DatasetFormatError, match="checksum"):
            read_dataset(str(path))

    def test_header_without_records(self, small_dataset, tmp_path):
        header_line = json.dumps({"header": small_dataset.header.to_dict()}, separators=(",", ":")) + "\n"
        digest = hashlib.sha256(header_line.encode("utf-8")).hexdigest()
        trailer_line = json.dumps({"trailer": {"records": 0, "sha256": digest}}) + "\n"
        path = tmp_path / "empty.jsonl"
        path.write_text(header_line + trailer_line, encoding="utf-8")
        with pytest.raises(DatasetFormatError):
            read_dataset(str(path))

    def test_unsupported_version(self, small_dataset, tmp_path):
        path = tmp_path / "dataset.jsonl"
        write_dataset(small_dataset, str(path))
        lines = path.read_text(encoding="utf-8").splitlines(keepends=True)
        header = json.loads(lines[0])
        header["header"]["format_version"] = 99
        lines[0] = json.dumps(header) + "\n"
        path.write_text("".join(lines), encoding="utf-8")
        with pytest.raises(DatasetFormatError, match="format_version"):
            read_dataset(str(path))

    def test_non_integer_master_seed(self, small_dataset, tmp_path):
        path = tmp_path / "dataset.jsonl"
        write_dataset(small_dataset, str(path))
        lines = path.read_text(encoding="utf-8").splitlines(keepends=True)
        header = json.loads(lines[0])
        header["header"]["master_seed"] = "abc"
        lines[0] = json.dumps(header) + "\n"
        path.write_text("".join(lines), encoding="utf-8")
        with pytest.raises(DatasetFormatError, match="invalid header") as info:
            read_dataset(str(path))
        assert info.value.line == 1

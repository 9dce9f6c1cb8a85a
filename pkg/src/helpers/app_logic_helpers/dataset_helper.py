"""
Synthetic training sets: prior sampling, generation of Z_(P,M) and the train/validation split.
Record (p, m) always draws its noise from the stream derived from (master_seed, p, m), so the
result does not depend on thread count or generation order.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import List, Tuple

import numpy as np

from config.model_constants import FIR_PRIOR_MEAN, FIR_PRIOR_VARIANCE, GROWTH_PRIOR_BOXES
from exceptions.deepbayes_exceptions.exceptions import DeepBayesError, InvalidSpecError
from helpers.app_logic_helpers.drives_helper import simulate_wiener
from helpers.app_logic_helpers.simulation_helper import generate_input, simulate_fir, simulate_growth
from helpers.common_helper.logger_helper import LoggerHelper
from helpers.common_helper.rng_helper import (
    STREAM_PRIOR,
    STREAM_RECORD,
    STREAM_SPLIT,
    derive_seed,
    make_rng,
)
from models.model_spec import FirModelSpec, GrowthModelSpec, WienerModelSpec
from models.prior_spec import GaussianPrior, PriorSpec
from models.signal_record import SignalRecord
from models.synthetic_dataset import (
    ROLE_TRAIN,
    ROLE_VALIDATION,
    DatasetHeader,
    SyntheticDataset,
)
from models.theta_vector import ThetaVector

logger = LoggerHelper(__name__).get_logger()


def sample_prior(prior: PriorSpec, P: int, seed: int) -> List[ThetaVector]:
    if not isinstance(P, (int, np.integer)) or P < 1:
        raise InvalidSpecError(f"P must be a positive integer, got {P!r}")
    rng = make_rng(seed, STREAM_PRIOR)
    columns = [component.sample(rng, int(P)) for component in prior.components]
    draws = np.concatenate(columns, axis=1)
    mask = prior.positivity_mask
    return [ThetaVector(row, mask) for row in draws]


def simulate(model_spec, theta, seed: int, u=None) -> np.ndarray:
    """One output signal of any model family."""
    values = theta.values if isinstance(theta, ThetaVector) else np.asarray(theta, dtype=np.float64).reshape(-1)
    if values.size != model_spec.theta_dim:
        raise InvalidSpecError(f"{model_spec.family} model expects {model_spec.theta_dim} parameters, got {values.size}")
    if u is None:
        u = generate_input(model_spec.input)

    if isinstance(model_spec, FirModelSpec):
        return simulate_fir(values, u, model_spec.noise_std, seed)
    if isinstance(model_spec, GrowthModelSpec):
        y, _ = simulate_growth(model_spec, values, seed, u=u)
        return y
    if isinstance(model_spec, WienerModelSpec):
        return simulate_wiener(values[:4], values[4], u, model_spec.dt, seed)
    raise InvalidSpecError(f"unsupported model spec {type(model_spec).__name__}")


def generate_dataset(model_spec, prior: PriorSpec, P: int, M: int, seed: int, threads: int = 1) -> SyntheticDataset:
    header = DatasetHeader({
        "model": model_spec.to_dict(),
        "prior": prior.to_dict(),
        "P": P,
        "M": M,
        "N": model_spec.length,
        "master_seed": seed,
    })
    return regenerate(header, threads=threads)


def regenerate(header: DatasetHeader, threads: int = 1) -> SyntheticDataset:
    """Rebuild every record from the header alone."""
    model_spec, P, M, seed = header.model, header.P, header.M, header.master_seed
    thetas = sample_prior(header.prior, P, seed)
    u = generate_input(model_spec.input)

    def build(index: int) -> SignalRecord:
        p, m = divmod(index, M)
        record_seed = derive_seed(seed, STREAM_RECORD, p, m)
        try:
            y = simulate(model_spec, thetas[p], record_seed, u=u)
        except DeepBayesError as e:
            e.args = (f"record (p={p}, m={m}): {e}",)
            raise
        return SignalRecord(p, m, thetas[p], y, record_seed)

    logger.info("Generating %d x %d records of length %d with %d thread(s)", P, M, model_spec.length, threads)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            records = list(executor.map(build, range(P * M)))
    else:
        records = [build(index) for index in range(P * M)]
    return SyntheticDataset(header, records)


def split_dataset(dataset: SyntheticDataset, ratio: float, seed: int) -> Tuple[SyntheticDataset, SyntheticDataset]:
    """Seeded shuffle of the (p, m) records, first round(ratio * n) go to training."""
    if not (0.0 < ratio < 1.0):
        raise InvalidSpecError(f"split ratio must lie strictly between 0 and 1, got {ratio}")
    n = len(dataset)
    n_train = int(round(ratio * n))
    if n_train == 0 or n_train == n:
        raise InvalidSpecError(f"ratio {ratio} on {n} records leaves one side empty")

    order = make_rng(seed, STREAM_SPLIT).permutation(n)
    split = {"ratio": ratio, "seed": int(seed), "source_role": dataset.header.role}
    train = dataset.subset(sorted(order[:n_train]), ROLE_TRAIN, split)
    validation = dataset.subset(sorted(order[n_train:]), ROLE_VALIDATION, split)
    logger.info("Split %d records into %d train / %d validation", n, len(train), len(validation))
    return train, validation


def default_prior(model_spec) -> PriorSpec:
    """Prior used when a run does not give one: the benchmark boxes for M1/M2, N(1, I/3) for the FIR model."""
    if isinstance(model_spec, GrowthModelSpec) and model_spec.variant in GROWTH_PRIOR_BOXES:
        return PriorSpec.uniform_box(GROWTH_PRIOR_BOXES[model_spec.variant], model_spec.variance_mask)
    if isinstance(model_spec, FirModelSpec):
        mean = np.resize(np.asarray(FIR_PRIOR_MEAN, dtype=np.float64), model_spec.order)
        return PriorSpec([GaussianPrior(mean, FIR_PRIOR_VARIANCE * np.eye(model_spec.order))])
    raise InvalidSpecError(f"no default prior for a {model_spec.family} model; give one explicitly")

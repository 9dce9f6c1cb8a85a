"""
Mini-batch training of the recurrent estimator and the architecture grid search.
"""

import time
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from config.defaults import GRID_DENSE, GRID_HIDDEN, GRID_LAYERS
from exceptions.deepbayes_exceptions.exceptions import (
    DeepBayesError,
    DivergenceError,
    InvalidSpecError,
)
from helpers.app_logic_helpers.early_stopping_helper import early_stop_update
from helpers.app_logic_helpers.optimizer_helper import AdamState, adam_step, lr_schedule
from helpers.app_logic_helpers.rnn_helper import forward_batch, init_weights, loss_and_gradients, loss_mse
from helpers.common_helper.logger_helper import LoggerHelper
from helpers.common_helper.rng_helper import STREAM_SHUFFLE, make_rng
from models.early_stop_state import EarlyStopState
from models.rnn_config import RnnConfig, TrainConfig
from models.rnn_estimator import RnnEstimator, TrainingCheckpoint
from models.rnn_weights import RnnWeights
from models.synthetic_dataset import SyntheticDataset

logger = LoggerHelper(__name__).get_logger()

HISTORY_COLUMNS = ["epoch", "train_loss", "val_loss", "eta"]


def standardization_stats(signals: np.ndarray) -> Tuple[float, float]:
    mean = float(np.mean(signals))
    std = float(np.std(signals))
    return mean, std if std > 0 else 1.0


def evaluate_loss(weights: RnnWeights, x: np.ndarray, thetas: np.ndarray, batch_size: int) -> float:
    total = 0.0
    for start in range(0, x.shape[0], batch_size):
        theta_hat, _ = forward_batch(weights, x[start:start + batch_size])
        total += loss_mse(theta_hat, thetas[start:start + batch_size]) * theta_hat.shape[0]
    return total / x.shape[0]


def _as_arrays(dataset) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(dataset, SyntheticDataset):
        return dataset.signals(), dataset.thetas()
    signals, thetas = dataset
    return np.atleast_2d(np.asarray(signals, dtype=np.float64)), np.atleast_2d(np.asarray(thetas, dtype=np.float64))


def _checkpoint(weights, mean, std, history, stopped_epoch, epoch, train_config, started, stopper, optimizer):
    return TrainingCheckpoint(
        estimator=RnnEstimator(weights.copy(), mean, std),
        history=pd.DataFrame(history, columns=HISTORY_COLUMNS),
        stopped_epoch=stopped_epoch,
        checkpoint_epoch=epoch,
        train_config=train_config.to_dict(),
        training_seconds=time.perf_counter() - started,
        lowest_epoch=stopper.lowest_epoch,
        lowest_val_loss=stopper.lowest_val_loss,
        optimizer_state=optimizer.to_dict(),
        eta=history[-1][3],
    )


def train(train_set, val_set, rnn_config: RnnConfig, train_config: TrainConfig,
          progress: bool = False) -> TrainingCheckpoint:
    """
    Train with Adam on shuffled mini-batches. Every epoch records train loss, validation loss and
    learning rate. On an early stop the returned weights are those of the stopping epoch;
    otherwise those after the last epoch.
    """
    train_y, train_theta = _as_arrays(train_set)
    val_y, val_theta = _as_arrays(val_set)
    if train_y.shape[0] == 0 or val_y.shape[0] == 0:
        raise InvalidSpecError("training and validation sets must be non-empty")
    if train_theta.shape[1] != rnn_config.d:
        raise InvalidSpecError(f"network outputs {rnn_config.d} values, data has {train_theta.shape[1]} parameters")

    started = time.perf_counter()
    mean, std = standardization_stats(train_y)
    x_train = ((train_y - mean) / std)[:, :, None]
    x_val = ((val_y - mean) / std)[:, :, None]

    weights = init_weights(rnn_config, train_config.seed)
    optimizer = AdamState(train_config.beta1, train_config.beta2, train_config.epsilon)
    stopper = EarlyStopState()
    history: List[list] = []
    stopped_epoch: Optional[int] = None
    last_finite = None
    n_train = x_train.shape[0]

    logger.info(
        "Training %s (%d parameters) on %d signals, validating on %d",
        rnn_config.label(), weights.parameter_count, n_train, x_val.shape[0],
    )
    epochs = tqdm(range(1, train_config.epochs + 1), desc=rnn_config.label(), disable=not progress)
    for epoch in epochs:
        eta = lr_schedule(train_config.eta0, train_config.decay_factor, train_config.epochs, epoch)
        order = make_rng(train_config.seed, STREAM_SHUFFLE, epoch).permutation(n_train)
        running = 0.0
        try:
            for start in range(0, n_train, train_config.batch_size):
                batch = order[start:start + train_config.batch_size]
                loss, grads = loss_and_gradients(weights, x_train[batch], train_theta[batch])
                if not np.isfinite(loss):
                    raise DivergenceError(f"training loss became {loss} at epoch {epoch}", checkpoint=last_finite)
                adam_step(optimizer, weights.params, grads, eta, train_config.clip_norm)
                running += loss * batch.size
            val_loss = evaluate_loss(weights, x_val, val_theta, train_config.batch_size)
        except DivergenceError:
            raise
        except (DeepBayesError, FloatingPointError) as e:
            raise DivergenceError(f"training diverged at epoch {epoch}: {e}", checkpoint=last_finite)
        if not np.isfinite(val_loss) or not np.all([np.all(np.isfinite(a)) for _, a in weights.items()]):
            raise DivergenceError(f"validation loss became {val_loss} at epoch {epoch}", checkpoint=last_finite)

        train_loss = running / n_train
        history.append([epoch, train_loss, val_loss, eta])
        logger.debug("epoch %d: train %.6e val %.6e eta %.3e", epoch, train_loss, val_loss, eta)
        epochs.set_postfix(val=f"{val_loss:.3e}")

        last_finite = _checkpoint(weights, mean, std, history, None, epoch, train_config, started, stopper, optimizer)
        if train_config.early_stopping:
            stopper, stop = early_stop_update(
                stopper, val_loss, epoch, train_config.patience, train_config.tolerance, weights.copy()
            )
            if stop:
                stopped_epoch = epoch
                break

    final_epoch = history[-1][0]
    result = _checkpoint(
        weights, mean, std, history, stopped_epoch, final_epoch, train_config, started, stopper, optimizer
    )
    logger.info(
        "Finished after %d epoch(s)%s: validation loss %.6e",
        final_epoch, " (early stop)" if stopped_epoch else "", result.val_loss,
    )
    return result


def grid_search(grid: List[RnnConfig], train_set, val_set, train_config: TrainConfig,
                progress: bool = False) -> Tuple[pd.DataFrame, List[Optional[TrainingCheckpoint]]]:
    """
    Train every configuration on the same data and seeds. Rows are ranked by validation loss,
    ties go to the smaller network; failed cells are reported last with their error.
    The loss ranked is the one of the returned checkpoint (the stopping epoch), not the lowest seen.
    """
    if not grid:
        raise InvalidSpecError("grid search needs at least one configuration")

    rows, checkpoints = [], []
    for index, config in enumerate(grid):
        parameters = init_weights(config, train_config.seed).parameter_count
        row = {
            "index": index, "cell": config.cell, "n_l": config.n_l, "n_H": config.n_H, "n_z": config.n_z,
            "parameters": parameters, "train_mse": np.nan, "val_mse": np.inf,
            "stopped_epoch": None, "error": "",
        }
        try:
            checkpoint = train(train_set, val_set, config, train_config, progress=progress)
            row.update(train_mse=checkpoint.train_loss, val_mse=checkpoint.val_loss, stopped_epoch=checkpoint.stopped_epoch)
        except DeepBayesError as e:
            logger.warning("Grid cell %s failed: %s", config.label(), e)
            checkpoint = None
            row["error"] = f"{e.category}: {e}"
        rows.append(row)
        checkpoints.append(checkpoint)

    report = pd.DataFrame(rows)
    report["failed"] = report["error"] != ""
    report = report.sort_values(["failed", "val_mse", "parameters", "index"], kind="mergesort")
    report = report.drop(columns="failed").reset_index(drop=True)
    report.insert(0, "rank", np.arange(1, len(report) + 1))
    ranked = [checkpoints[i] for i in report["index"]]
    return report, ranked


def default_grid(d: int, cell: str = "gru", layers=None, hidden=None, dense=None) -> List[RnnConfig]:
    return [
        RnnConfig({"cell": cell, "n_l": n_l, "n_H": n_h, "n_z": n_z, "d": d})
        for n_l in (layers or GRID_LAYERS)
        for n_h in (hidden or GRID_HIDDEN)
        for n_z in (dense or GRID_DENSE)
    ]

from typing import Tuple

import numpy as np

from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError
from helpers.common_helper.logger_helper import LoggerHelper
from models.early_stop_state import EarlyStopState

logger = LoggerHelper(__name__).get_logger()


def _relative_change(current: float, previous: float) -> float:
    if previous == 0.0:
        return 0.0 if current == 0.0 else np.inf
    return abs(current - previous) / abs(previous)


def early_stop_update(state: EarlyStopState, val_loss: float, epoch: int, patience: int,
                      tolerance: float, weights=None) -> Tuple[EarlyStopState, bool]:
    """
    Advance the early-stopping rule by one epoch.

    An epoch qualifies when its validation loss moved by less than `tolerance` relative to the
    previous epoch. j grows only while qualifying epochs follow each other directly and falls back
    to 1 on any miss; training stops once j reaches `patience`, and the current epoch becomes the
    saved checkpoint.
    """
    if not np.isfinite(val_loss):
        raise InvalidSpecError(f"validation loss must be finite, got {val_loss}")

    previous = state.prev_val_loss
    qualifies = previous is not None and _relative_change(val_loss, previous) < tolerance
    if qualifies:
        consecutive = state.e_prev is not None and state.e_prev == epoch - 1
        state.j = state.j + 1 if consecutive else 1
        state.e_prev = epoch
    else:
        state.j = 1

    state.prev_val_loss = float(val_loss)
    if state.lowest_val_loss is None or val_loss < state.lowest_val_loss:
        state.lowest_val_loss = float(val_loss)
        state.lowest_epoch = epoch

    stop = qualifies and state.j >= patience
    if stop:
        state.flag = True
        state.j = patience
        state.best_epoch = epoch
        state.best_val_loss = float(val_loss)
        state.best_weights = weights
        logger.info("Early stop at epoch %d (validation loss %.6e)", epoch, val_loss)
    return state, stop

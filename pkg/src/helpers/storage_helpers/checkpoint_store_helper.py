"""
Checkpoint files: one JSON document with the configs, normalisation statistics, stopping record,
optimiser state and flat row-major weight arrays. The per-epoch history is written beside it as CSV.
"""

import json
import os
from typing import Optional

import pandas as pd

from config.defaults import CHECKPOINT_FORMAT_VERSION
from exceptions.deepbayes_exceptions.exceptions import DatasetFormatError, DeepBayesError
from helpers.common_helper.logger_helper import LoggerHelper
from models.rnn_estimator import TrainingCheckpoint

logger = LoggerHelper(__name__).get_logger()


def write_checkpoint(checkpoint: TrainingCheckpoint, path: str, history_path: Optional[str] = None) -> None:
    tmp_path = f"{path}.partial"
    with open(tmp_path, "w", encoding="utf-8") as handle:
        json.dump(checkpoint.to_dict(), handle, allow_nan=False)
    os.replace(tmp_path, path)
    if history_path:
        checkpoint.history.to_csv(history_path, index=False, float_format="%.17g")
    logger.info("Wrote checkpoint (epoch %d) to %s", checkpoint.checkpoint_epoch, path)


def _load(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except json.JSONDecodeError as e:
        raise DatasetFormatError(f"checkpoint {path} is not valid JSON: {e.msg}", line=e.lineno, offset=e.pos)

    version = data.get("format_version") if isinstance(data, dict) else None
    if version != CHECKPOINT_FORMAT_VERSION:
        raise DatasetFormatError(f"checkpoint format_version {version!r} is not supported")
    return data


def read_checkpoint(path: str, history_path: Optional[str] = None) -> TrainingCheckpoint:
    """Full checkpoint: estimator, stopping record and optimiser state, plus the history when given."""
    data = _load(path)
    history = read_history(history_path) if history_path else None
    try:
        return TrainingCheckpoint.from_dict(data, history)
    except (DeepBayesError, KeyError, TypeError, ValueError) as e:
        raise DatasetFormatError(f"checkpoint {path} is inconsistent: {e}")


def read_history(path: str) -> pd.DataFrame:
    return pd.read_csv(path)

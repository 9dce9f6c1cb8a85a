from typing import Any, Dict

from command_processors.base_processor import BaseProcessor
from command_registry.processor_registry import CommandRegistry
from exceptions.deepbayes_exceptions.exceptions import DivergenceError
from helpers.app_logic_helpers.training_helper import default_grid, grid_search, train
from helpers.common_helper.logger_helper import LoggerHelper
from helpers.storage_helpers.checkpoint_store_helper import write_checkpoint
from helpers.storage_helpers.dataset_store_helper import read_dataset
from models.rnn_config import RnnConfig, TrainConfig
from models.run_context import RunContext

logger = LoggerHelper(__name__).get_logger()

CHECKPOINT_FILE = "checkpoint.json"
HISTORY_FILE = "history.csv"
LAST_FINITE_FILE = "checkpoint_last_finite.json"
GRID_FILE = "grid.csv"


@CommandRegistry.register("training")
class TrainingProcessor(BaseProcessor):
    def __init__(self):
        super().__init__({
            "train": self._train,
            "tune": self._tune,
        })

    def _load_sets(self, run: RunContext):
        paths = run.section("paths")
        return read_dataset(paths["train"]), read_dataset(paths["validation"])

    def _train_config(self, run: RunContext) -> TrainConfig:
        section = run.section("train")
        section.setdefault("seed", run.seed)
        config = self.build("train", lambda: TrainConfig(section))
        run.resolve("train", config.to_dict())
        return config

    def _write(self, run: RunContext, checkpoint) -> None:
        write_checkpoint(checkpoint, run.staged.path(CHECKPOINT_FILE), run.staged.path(HISTORY_FILE))

    def _train(self, run: RunContext) -> Dict[str, Any]:
        """
        Train one estimator on a train/validation pair of dataset files.

        Required config: paths.train, paths.validation
        Optional config: rnn (architecture), train (optimiser and stopping settings)
        """
        train_config = self._train_config(run)
        train_set, val_set = self._load_sets(run)
        rnn_section = {**run.section("rnn"), "d": train_set.header.model.theta_dim}
        rnn_config = self.build("rnn", lambda: RnnConfig(rnn_section))
        run.resolve("rnn", rnn_config.to_dict())

        try:
            checkpoint = train(train_set, val_set, rnn_config, train_config, progress=run.progress)
        except DivergenceError as e:
            if e.checkpoint is not None:
                # keep the last finite state; the run still fails
                write_checkpoint(e.checkpoint, run.staged.path(LAST_FINITE_FILE))
                run.staged.commit()
            raise
        self._write(run, checkpoint)
        return {
            "network": rnn_config.label(),
            "epochs": checkpoint.checkpoint_epoch,
            "stopped_epoch": checkpoint.stopped_epoch,
            "val_mse": f"{checkpoint.val_loss:.6g}",
        }

    def _tune(self, run: RunContext) -> Dict[str, Any]:
        """
        Train every architecture in the grid and keep the one with the lowest validation loss.
        When every cell fails the run exits with a divergence error but still leaves grid.csv
        (and run.log) in the output directory, so the per-cell errors can be read.

        Required config: paths.train, paths.validation
        Optional config: grid.cell, grid.layers, grid.hidden, grid.dense, train
        """
        train_config = self._train_config(run)
        section = run.section("grid")
        train_set, val_set = self._load_sets(run)
        d = train_set.header.model.theta_dim
        grid = self.build("grid", lambda: default_grid(
            d, section.get("cell", "gru"), section.get("layers"), section.get("hidden"), section.get("dense")
        ))
        run.resolve("grid", {
            "cell": grid[0].cell,
            "layers": sorted({config.n_l for config in grid}),
            "hidden": sorted({config.n_H for config in grid}),
            "dense": sorted({config.n_z for config in grid}),
        })

        report, ranked = grid_search(grid, train_set, val_set, train_config, progress=run.progress)
        run.staged.write_csv(GRID_FILE, report)
        best = ranked[0]
        if best is None:
            run.staged.commit()
            raise DivergenceError(f"all {len(grid)} grid cells failed")
        self._write(run, best)
        return {
            "cells": len(grid),
            "best": best.estimator.config.label(),
            "val_mse": f"{best.val_loss:.6g}",
        }

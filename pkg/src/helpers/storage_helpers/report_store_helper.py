"""
Run output directories. A run writes into a staging directory under --out and only moves the
files into place once every step succeeded, so a failed run leaves nothing behind.
"""

import json
import os
import shutil
import tempfile
from typing import Any, Dict, List

import pandas as pd

from helpers.common_helper.logger_helper import LoggerHelper

logger = LoggerHelper(__name__).get_logger()

RESOLVED_CONFIG_NAME = "resolved_config.json"
RUN_LOG_NAME = "run.log"


class StagedOutput:
    """
    Collects the files of one run.

    Example usage:
    ```
    with StagedOutput(out_dir) as staged:
        write_dataset(dataset, staged.path("dataset.jsonl"))
        staged.write_csv("grid.csv", report)
    ```
    """

    def __init__(self, out_dir: str):
        self.out_dir = out_dir
        self.staging_dir = None
        self.files: List[str] = []

    def __enter__(self) -> "StagedOutput":
        os.makedirs(self.out_dir, exist_ok=True)
        self.staging_dir = tempfile.mkdtemp(prefix=".staging-", dir=self.out_dir)
        return self

    def __exit__(self, exc_type, exc, tb) -> bool:
        try:
            if exc_type is None:
                self.commit()
            else:
                logger.info("Discarding staged outputs after %s", exc_type.__name__)
        finally:
            shutil.rmtree(self.staging_dir, ignore_errors=True)
        return False

    def path(self, name: str) -> str:
        if name not in self.files:
            self.files.append(name)
        return os.path.join(self.staging_dir, name)

    def write_csv(self, name: str, frame: pd.DataFrame, index: bool = False) -> str:
        target = self.path(name)
        frame.to_csv(target, index=index, float_format="%.17g")
        return target

    def write_json(self, name: str, payload: Dict[str, Any]) -> str:
        target = self.path(name)
        with open(target, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=2, sort_keys=True, default=str)
        return target

    def commit(self) -> List[str]:
        final_paths = []
        for name in self.files:
            source = os.path.join(self.staging_dir, name)
            if not os.path.exists(source):
                continue
            target = os.path.join(self.out_dir, name)
            os.replace(source, target)
            final_paths.append(target)
        logger.info("Committed %d output file(s) to %s", len(final_paths), self.out_dir)
        return final_paths

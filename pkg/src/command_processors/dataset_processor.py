from typing import Any, Dict

from command_processors.base_processor import BaseProcessor
from command_registry.processor_registry import CommandRegistry
from config.defaults import SPLIT_RATIO
from helpers.app_logic_helpers.dataset_helper import regenerate, split_dataset
from helpers.common_helper.logger_helper import LoggerHelper
from helpers.storage_helpers.dataset_store_helper import read_dataset, write_dataset
from models.run_context import RunContext
from models.synthetic_dataset import DatasetHeader

logger = LoggerHelper(__name__).get_logger()

DATASET_FILE = "dataset.jsonl"
TRAIN_FILE = "train.jsonl"
VALIDATION_FILE = "validation.jsonl"


@CommandRegistry.register("dataset")
class DatasetProcessor(BaseProcessor):
    def __init__(self):
        super().__init__({
            "generate": self._generate,
            "split": self._split,
        })

    def _generate(self, run: RunContext) -> Dict[str, Any]:
        """
        Generate Z_(P,M) from the model and prior sections.

        Required config: model.family, dataset.P, dataset.M
        Optional config: prior (defaults to the benchmark prior of the model), dataset.seed
        """
        model_spec = self.model_spec(run)
        prior = self.prior(run, model_spec)
        section = run.section("dataset")
        header = self.build("dataset", lambda: DatasetHeader({
            "model": model_spec.to_dict(),
            "prior": prior.to_dict(),
            "P": section["P"],
            "M": section["M"],
            "N": model_spec.length,
            "master_seed": section.get("seed", run.seed),
        }))
        run.resolve("dataset", {"P": header.P, "M": header.M, "seed": header.master_seed})

        dataset = regenerate(header, threads=run.threads)
        digest = write_dataset(dataset, run.staged.path(DATASET_FILE))
        return {"records": len(dataset), "P": header.P, "M": header.M, "N": header.N, "sha256": digest[:16]}

    def _split(self, run: RunContext) -> Dict[str, Any]:
        """
        Split a dataset file into train and validation files.

        Required config: paths.dataset
        Optional config: split.ratio (default 0.75), split.seed
        """
        section = run.section("split")
        ratio = section.get("ratio", SPLIT_RATIO)
        seed = section.get("seed", run.seed)
        run.resolve("split", {"ratio": ratio, "seed": seed})

        dataset = read_dataset(run.section("paths")["dataset"])
        train, validation = self.build("split", lambda: split_dataset(dataset, ratio, seed))
        write_dataset(train, run.staged.path(TRAIN_FILE))
        write_dataset(validation, run.staged.path(VALIDATION_FILE))
        return {"train": len(train), "validation": len(validation)}

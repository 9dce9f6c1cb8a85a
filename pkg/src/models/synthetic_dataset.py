"""
Synthetic training set Z_(P,M): P prior draws times M noise replicates, plus the header
that is enough to regenerate every record.
"""

from collections import Counter
from typing import Any, Dict, List, Optional

import numpy as np

from config.defaults import DATASET_FORMAT_VERSION
from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError
from models.model_spec import model_spec_from_dict
from models.prior_spec import PriorSpec
from models.signal_record import SignalRecord

ROLE_FULL = "full"
ROLE_TRAIN = "train"
ROLE_VALIDATION = "validation"
VALID_ROLES = (ROLE_FULL, ROLE_TRAIN, ROLE_VALIDATION)


class DatasetHeader:

    def __init__(self, data: Dict[str, Any]):
        self.model = model_spec_from_dict(data["model"])
        self.prior: PriorSpec = PriorSpec.from_dict(data["prior"])
        self.P: int = data["P"]
        self.M: int = data["M"]
        self.N: int = data.get("N", self.model.length)
        self.master_seed: int = int(data["master_seed"])
        self.format_version: int = data.get("format_version", DATASET_FORMAT_VERSION)
        self.role: str = data.get("role", ROLE_FULL)
        self.split: Optional[Dict[str, Any]] = data.get("split")

        self._validate()

    def _validate(self):
        for name in ("P", "M", "N"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise InvalidSpecError(f"{name} must be a positive integer, got {value!r}")
        if self.N != self.model.length:
            raise InvalidSpecError(f"N={self.N} differs from the model signal length {self.model.length}")
        if self.prior.dim != self.model.theta_dim:
            raise InvalidSpecError(
                f"prior has {self.prior.dim} components, model expects {self.model.theta_dim}"
            )
        if self.role not in VALID_ROLES:
            raise InvalidSpecError(f"role must be one of {VALID_ROLES}, got {self.role!r}")

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "format_version": self.format_version,
            "model": self.model.to_dict(),
            "prior": self.prior.to_dict(),
            "P": self.P,
            "M": self.M,
            "N": self.N,
            "master_seed": self.master_seed,
            "role": self.role,
        }
        if self.split is not None:
            data["split"] = dict(self.split)
        return data


class SyntheticDataset:

    def __init__(self, header: DatasetHeader, records: List[SignalRecord]):
        self.header: DatasetHeader = header
        self.records: List[SignalRecord] = list(records)

        self._validate()

    def _validate(self):
        if not self.records:
            raise InvalidSpecError("dataset must hold at least one record")
        for record in self.records:
            if record.length != self.header.N:
                raise InvalidSpecError(
                    f"record (p={record.p}, m={record.m}) has length {record.length}, expected {self.header.N}"
                )
            if not self.header.prior.contains(record.theta.values):
                raise InvalidSpecError(
                    f"record (p={record.p}, m={record.m}) has theta {record.theta.values.tolist()} "
                    f"outside the prior support"
                )
        if self.header.role == ROLE_FULL:
            expected = self.header.P * self.header.M
            if len(self.records) != expected:
                raise InvalidSpecError(f"expected P*M={expected} records, got {len(self.records)}")
            per_p = Counter(record.p for record in self.records)
            uneven = {p: count for p, count in per_p.items() if count != self.header.M}
            if uneven or len(per_p) != self.header.P:
                raise InvalidSpecError(f"every p needs exactly M={self.header.M} records, got {dict(per_p)}")

    def __len__(self) -> int:
        return len(self.records)

    def signals(self) -> np.ndarray:
        """Records stacked as a (records, N) array."""
        return np.stack([record.y for record in self.records])

    def thetas(self) -> np.ndarray:
        """Parameters stacked as a (records, d) array."""
        return np.stack([record.theta.values for record in self.records])

    def subset(self, indices, role: str, split: Optional[Dict[str, Any]] = None) -> "SyntheticDataset":
        header_data = self.header.to_dict()
        header_data["role"] = role
        if split is not None:
            header_data["split"] = split
        return SyntheticDataset(DatasetHeader(header_data), [self.records[i] for i in indices])

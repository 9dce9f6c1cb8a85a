"""
Dataset files.

Line 1 is a JSON header, then one JSON object per record, then a trailer carrying the record
count and the sha256 of every preceding byte. Reals are written with Python's repr, which
round-trips float64 exactly.
"""

import hashlib
import json
import os
from typing import List

from config.defaults import DATASET_FORMAT_VERSION
from exceptions.deepbayes_exceptions.exceptions import DatasetFormatError, DeepBayesError
from helpers.common_helper.logger_helper import LoggerHelper
from models.signal_record import SignalRecord
from models.synthetic_dataset import DatasetHeader, SyntheticDataset

logger = LoggerHelper(__name__).get_logger()

TRAILER_KEY = "trailer"


def _dumps(payload) -> str:
    return json.dumps(payload, separators=(",", ":"), allow_nan=False)


def write_dataset(dataset: SyntheticDataset, path: str) -> str:
    """Write to a temporary sibling first and rename, so readers never see a half-written file."""
    digest = hashlib.sha256()
    lines = [_dumps({"header": dataset.header.to_dict()})]
    lines.extend(_dumps(record.to_dict()) for record in dataset.records)

    tmp_path = f"{path}.partial"
    with open(tmp_path, "w", encoding="utf-8", newline="\n") as handle:
        for line in lines:
            data = line + "\n"
            digest.update(data.encode("utf-8"))
            handle.write(data)
        handle.write(_dumps({TRAILER_KEY: {"records": len(dataset.records), "sha256": digest.hexdigest()}}) + "\n")
    os.replace(tmp_path, path)

    logger.info("Wrote %d records to %s", len(dataset.records), path)
    return digest.hexdigest()


def _parse_line(raw: bytes, line_number: int, offset: int) -> dict:
    try:
        payload = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise DatasetFormatError(f"malformed JSON: {e}", line=line_number, offset=offset)
    if not isinstance(payload, dict):
        raise DatasetFormatError("expected a JSON object", line=line_number, offset=offset)
    return payload


def read_dataset(path: str) -> SyntheticDataset:
    with open(path, "rb") as handle:
        raw_lines = handle.readlines()

    if not raw_lines:
        raise DatasetFormatError(f"{path} is empty", line=1, offset=0)

    digest = hashlib.sha256()
    offset = 0
    header = None
    records: List[SignalRecord] = []
    trailer = None

    for index, raw in enumerate(raw_lines):
        line_number = index + 1
        if not raw.endswith(b"\n"):
            raise DatasetFormatError("truncated line", line=line_number, offset=offset)
        payload = _parse_line(raw, line_number, offset)

        if index == 0:
            if "header" not in payload:
                raise DatasetFormatError("first line must hold the header", line=1, offset=0)
            version = payload["header"].get("format_version")
            if version != DATASET_FORMAT_VERSION:
                raise DatasetFormatError(
                    f"format_version {version!r} is not supported (expected {DATASET_FORMAT_VERSION})",
                    line=1, offset=0,
                )
            try:
                header = DatasetHeader(payload["header"])
            except (DeepBayesError, KeyError, TypeError, ValueError) as e:
                raise DatasetFormatError(f"invalid header: {e}", line=1, offset=0)
        elif TRAILER_KEY in payload:
            trailer = payload[TRAILER_KEY]
            if line_number != len(raw_lines):
                raise DatasetFormatError("data after the trailer", line=line_number + 1, offset=offset + len(raw))
            break
        else:
            records.append(_parse_record(payload, line_number, offset))

        digest.update(raw)
        offset += len(raw)

    if trailer is None:
        raise DatasetFormatError("missing trailer; the file is truncated", line=len(raw_lines), offset=offset)
    if not records:
        raise DatasetFormatError("dataset holds no records; P*M must be at least 1", line=2, offset=offset)
    if trailer.get("records") != len(records):
        raise DatasetFormatError(
            f"trailer announces {trailer.get('records')} records, found {len(records)}",
            line=len(raw_lines), offset=offset,
        )
    if trailer.get("sha256") != digest.hexdigest():
        raise DatasetFormatError("checksum mismatch", line=len(raw_lines), offset=offset)

    try:
        dataset = SyntheticDataset(header, records)
    except DeepBayesError as e:
        raise DatasetFormatError(f"inconsistent dataset: {e}")
    logger.info("Read %d records from %s", len(records), path)
    return dataset


def _parse_record(payload: dict, line_number: int, offset: int) -> SignalRecord:
    try:
        declared = payload["n"]
        record = SignalRecord.from_dict(payload)
    except (DeepBayesError, KeyError, TypeError, ValueError) as e:
        raise DatasetFormatError(f"invalid record: {e}", line=line_number, offset=offset)
    if declared != record.length:
        raise DatasetFormatError(
            f"length field says {declared}, signal has {record.length} samples", line=line_number, offset=offset
        )
    return record

"""On-disk stores: epoched records and feature matrices.

Both use the same container: 4-byte magic, little-endian u32 header
length, a JSON header, then raw little-endian float32 blocks. Files are
written via temp-file-then-rename so a crash never leaves a half-written
artifact.
"""

from __future__ import annotations

import json
import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from .epochs import EpochedRecord
from .errors import DataError, ParseError
from .stages import SleepStage

EPOCH_MAGIC = b"NIES"
FEATURE_MAGIC = b"NIFS"


def atomic_write_bytes(path, payload: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _pack(magic: bytes, header: dict, blocks: list[np.ndarray]) -> bytes:
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    parts = [magic, struct.pack("<I", len(header_bytes)), header_bytes]
    for block in blocks:
        parts.append(np.ascontiguousarray(block, dtype="<f4").tobytes())
    return b"".join(parts)


def _unpack(data: bytes, magic: bytes):
    if data[:4] != magic:
        raise ParseError(f"bad magic {data[:4]!r}, expected {magic!r}", offset=0)
    (header_len,) = struct.unpack_from("<I", data, 4)
    header = json.loads(data[8 : 8 + header_len].decode("utf-8"))
    return header, data[8 + header_len :]


def save_epoched(record: EpochedRecord, path) -> None:
    names = record.channel_names()
    header = {
        "subject_id": record.subject_id,
        "epoch_len_s": record.epoch_len_s,
        "channels": [
            {
                "name": n,
                "sampling_hz": record.channel_hz[n],
                "samples_per_epoch": int(record.windows[n].shape[1]),
            }
            for n in names
        ],
        "n_epochs": record.n_epochs,
        "labels": [s.name if s is not None else None for s in record.labels],
    }
    blocks = [record.windows[n] for n in names]
    atomic_write_bytes(path, _pack(EPOCH_MAGIC, header, blocks))


def load_epoched(path) -> EpochedRecord:
    with open(path, "rb") as fh:
        data = fh.read()
    header, payload = _unpack(data, EPOCH_MAGIC)
    n_epochs = header["n_epochs"]
    windows = {}
    channel_hz = {}
    off = 0
    for ch in header["channels"]:
        n = n_epochs * ch["samples_per_epoch"]
        block = np.frombuffer(payload, dtype="<f4", count=n, offset=off)
        windows[ch["name"]] = block.reshape(n_epochs, ch["samples_per_epoch"]).astype(
            np.float64
        )
        channel_hz[ch["name"]] = ch["sampling_hz"]
        off += n * 4
    labels = [SleepStage[name] if name is not None else None for name in header["labels"]]
    return EpochedRecord(
        subject_id=header["subject_id"],
        epoch_len_s=header["epoch_len_s"],
        channel_hz=channel_hz,
        windows=windows,
        labels=labels,
    )


def list_store(store_dir, suffix: str) -> list[Path]:
    paths = sorted(Path(store_dir).glob(f"*{suffix}"))
    if not paths:
        raise DataError(f"no {suffix} files found in {store_dir}")
    return paths


def save_feature_file(path, values: np.ndarray, descriptor_names: list[str], labels, subject_id: str) -> None:
    header = {
        "subject_id": subject_id,
        "descriptor_names": list(descriptor_names),
        "n_rows": int(values.shape[0]),
        "labels": [s.name if s is not None else None for s in labels],
    }
    atomic_write_bytes(path, _pack(FEATURE_MAGIC, header, [values]))


def load_feature_file(path):
    with open(path, "rb") as fh:
        data = fh.read()
    header, payload = _unpack(data, FEATURE_MAGIC)
    p = len(header["descriptor_names"])
    n = header["n_rows"]
    values = (
        np.frombuffer(payload, dtype="<f4", count=n * p).reshape(n, p).astype(np.float64)
    )
    labels = [SleepStage[nm] if nm is not None else None for nm in header["labels"]]
    return values, header["descriptor_names"], labels, header["subject_id"]

"""EDF reader: fixed 256-byte header, per-signal subheaders, 16-bit
little-endian samples with linear digital-to-physical calibration.

Continuous EDF only. Annotations come from a sidecar label file, not from
the recording itself.
"""

from __future__ import annotations

import numpy as np

from .epochs import Channel, PsgRecord
from .errors import ParseError, StructuralError

HEADER_SIZE = 256
SIGNAL_HEADER_SIZE = 256


def _ascii_field(data: bytes, offset: int, width: int) -> str:
    if offset + width > len(data):
        raise ParseError("header truncated", offset=offset)
    try:
        return data[offset : offset + width].decode("ascii").strip()
    except UnicodeDecodeError:
        raise ParseError("non-ASCII bytes in header field", offset=offset)


def _int_field(data: bytes, offset: int, width: int, what: str) -> int:
    text = _ascii_field(data, offset, width)
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"expected integer for {what}, got {text!r}", offset=offset)


def _float_field(data: bytes, offset: int, width: int, what: str) -> float:
    text = _ascii_field(data, offset, width)
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"expected number for {what}, got {text!r}", offset=offset)


def parse_edf(data: bytes, subject_id: str | None = None) -> PsgRecord:
    """Decode an EDF byte string into a calibrated PsgRecord.

    A record count of -1 in the header is resolved from the file length.
    Raises ParseError for malformed header fields (with the byte offset)
    and StructuralError when the payload disagrees with the header.
    """
    if len(data) < HEADER_SIZE:
        raise ParseError("file shorter than the 256-byte header", offset=len(data))

    # Fixed header. Field widths per the format: 8 version, 80 patient,
    # 80 recording, 8 date, 8 time, 8 header bytes, 44 reserved,
    # 8 record count, 8 record duration, 4 signal count.
    _int_field(data, 0, 8, "version")
    patient = _ascii_field(data, 8, 80)
    header_bytes = _int_field(data, 184, 8, "header byte count")
    n_records = _int_field(data, 236, 8, "record count")
    record_duration = _float_field(data, 244, 8, "record duration")
    ns = _int_field(data, 252, 4, "signal count")

    if ns <= 0:
        raise ParseError(f"signal count must be positive, got {ns}", offset=252)
    if record_duration <= 0:
        raise ParseError("record duration must be positive", offset=244)

    expected_header = HEADER_SIZE + ns * SIGNAL_HEADER_SIZE
    if header_bytes != expected_header:
        raise ParseError(
            f"header byte count {header_bytes} != 256 + {ns}*256", offset=184
        )
    if len(data) < expected_header:
        raise ParseError("signal headers truncated", offset=len(data))

    # Per-signal subheaders are stored field-major: all labels, then all
    # transducers, and so on.
    base = HEADER_SIZE

    def column(width: int, start: int):
        return [(start + i * width, width) for i in range(ns)]

    off = base
    labels = [_ascii_field(data, o, w) for o, w in column(16, off)]
    off += ns * 16
    off += ns * 80  # transducer
    off += ns * 8  # physical dimension
    phys_min = [_float_field(data, o, w, "physical min") for o, w in column(8, off)]
    off += ns * 8
    phys_max = [_float_field(data, o, w, "physical max") for o, w in column(8, off)]
    off += ns * 8
    dig_min = [_int_field(data, o, w, "digital min") for o, w in column(8, off)]
    off += ns * 8
    dig_max = [_int_field(data, o, w, "digital max") for o, w in column(8, off)]
    off += ns * 8
    off += ns * 80  # prefilter
    spr_offsets = column(8, off)
    samples_per_record = []
    for o, w in spr_offsets:
        text = _ascii_field(data, o, w)
        try:
            spr = int(text)
        except ValueError:
            try:
                float(text)
            except ValueError:
                raise ParseError(
                    f"unreadable samples-per-record field {text!r}", offset=o
                )
            raise StructuralError(
                f"non-integer samples-per-record {text!r} for signal at offset {o}"
            )
        if spr <= 0:
            raise StructuralError(f"samples-per-record must be positive, got {spr}")
        samples_per_record.append(spr)

    for i in range(ns):
        if dig_max[i] == dig_min[i]:
            raise StructuralError(
                f"signal {labels[i]!r} has equal digital min and max ({dig_min[i]})"
            )

    record_samples = sum(samples_per_record)
    record_bytes = record_samples * 2
    payload = data[expected_header:]

    if n_records == -1:
        if len(payload) % record_bytes != 0:
            raise StructuralError(
                f"payload of {len(payload)} bytes is not a whole number of "
                f"{record_bytes}-byte records"
            )
        n_records = len(payload) // record_bytes
    elif n_records < 0:
        raise ParseError(f"invalid record count {n_records}", offset=236)

    needed = n_records * record_bytes
    if len(payload) < needed:
        raise StructuralError(
            f"header declares {n_records} records ({needed} bytes) but only "
            f"{len(payload)} payload bytes are present"
        )

    raw = np.frombuffer(payload[:needed], dtype="<i2").reshape(n_records, record_samples)

    channels = []
    col = 0
    for i in range(ns):
        spr = samples_per_record[i]
        digital = raw[:, col : col + spr].reshape(-1).astype(np.float64)
        col += spr
        gain = (phys_max[i] - phys_min[i]) / (dig_max[i] - dig_min[i])
        physical = (digital - dig_min[i]) * gain + phys_min[i]
        channels.append(
            Channel(
                name=labels[i],
                sampling_hz=samples_per_record[i] / record_duration,
                samples=physical,
            )
        )

    if subject_id is None:
        subject_id = patient.split()[0] if patient else "unknown"

    return PsgRecord(
        subject_id=subject_id,
        channels=channels,
        duration_s=n_records * record_duration,
    )


def parse_edf_file(path, subject_id: str | None = None) -> PsgRecord:
    with open(path, "rb") as fh:
        return parse_edf(fh.read(), subject_id=subject_id)

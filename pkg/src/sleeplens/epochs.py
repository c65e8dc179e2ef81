"""Signal record types and 30-second epoching."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AlignmentError, StructuralError
from .stages import SleepStage

DEFAULT_EPOCH_LEN_S = 30.0


@dataclass(frozen=True)
class Channel:
    name: str
    sampling_hz: float
    samples: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "samples", np.asarray(self.samples, dtype=np.float64)
        )
        if self.sampling_hz <= 0:
            raise StructuralError(f"channel {self.name!r}: sampling rate must be positive")


@dataclass(frozen=True)
class PsgRecord:
    """A multi-channel recording with per-channel sampling metadata."""

    subject_id: str
    channels: list[Channel]
    duration_s: float

    def __post_init__(self):
        names = [c.name for c in self.channels]
        if len(set(names)) != len(names):
            raise StructuralError(f"duplicate channel names in {self.subject_id!r}")
        for c in self.channels:
            expected = int(round(self.duration_s * c.sampling_hz))
            if len(c.samples) != expected:
                raise StructuralError(
                    f"channel {c.name!r}: {len(c.samples)} samples, expected "
                    f"{expected} for {self.duration_s} s at {c.sampling_hz} Hz"
                )

    def channel_names(self) -> list[str]:
        return [c.name for c in self.channels]


@dataclass(frozen=True)
class EpochedRecord:
    """Fixed-length windows of every channel, each with an optional stage label.

    windows maps channel name -> float array of shape (n_epochs, samples_per_epoch).
    labels[i] is None for unlabeled epochs.
    """

    subject_id: str
    epoch_len_s: float
    channel_hz: dict[str, float]
    windows: dict[str, np.ndarray]
    labels: list[SleepStage | None] = field(default_factory=list)

    @property
    def n_epochs(self) -> int:
        first = next(iter(self.windows.values()))
        return first.shape[0]

    def channel_names(self) -> list[str]:
        return list(self.windows.keys())

    def labeled_stages(self) -> list[SleepStage]:
        return [s for s in self.labels if s is not None]


def epoch_record(record: PsgRecord, labels, epoch_len_s: float = DEFAULT_EPOCH_LEN_S) -> EpochedRecord:
    """Cut a record into consecutive epoch windows and attach stage labels.

    Epoch i of a channel holds samples [i*L, (i+1)*L) with
    L = round(epoch_len_s * sampling_hz). Trailing partial windows are
    dropped, never padded. Epochs flagged for exclusion (label None)
    are dropped entirely.
    """
    if epoch_len_s <= 0:
        raise AlignmentError("epoch length must be positive")
    n_windows = int(np.floor(record.duration_s / epoch_len_s + 1e-9))
    labels = list(labels)
    if len(labels) > n_windows:
        raise AlignmentError(
            f"{len(labels)} labels but only {n_windows} whole "
            f"{epoch_len_s:g} s windows in a {record.duration_s:g} s record"
        )
    n_epochs = len(labels)
    keep = [i for i, lab in enumerate(labels) if lab is not None]

    windows = {}
    channel_hz = {}
    for ch in record.channels:
        L = int(round(epoch_len_s * ch.sampling_hz))
        usable = ch.samples[: n_epochs * L].reshape(n_epochs, L)
        windows[ch.name] = usable[keep].copy()
        channel_hz[ch.name] = ch.sampling_hz

    return EpochedRecord(
        subject_id=record.subject_id,
        epoch_len_s=epoch_len_s,
        channel_hz=channel_hz,
        windows=windows,
        labels=[labels[i] for i in keep],
    )

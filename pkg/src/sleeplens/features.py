"""Per-epoch feature catalogs.

Two catalogs are built from a channel list by a closed grammar, so the
column layout is a pure function of the montage:

* clinical catalog (featshort): per EEG channel, six relative band
  powers, delta-band RMS (slow-wave amplitude proxy), sigma-band RMS
  (spindle proxy), epoch RMS and the delta/beta power ratio; per EOG
  channel the same minus the ratio; per EMG channel epoch RMS and the
  95th-percentile absolute amplitude; plus montage aggregates (mean
  relative band power across EEG channels, and the EMG-to-EEG RMS
  ratio). On the two reference montages this yields 87 and 38 columns.

* exhaustive catalog (featlong): for every channel and for each of the
  full epoch and its two halves, a statistical block (mean, std,
  skewness, kurtosis, IQR, zero crossings, absolute energy), the Hjorth
  triple, absolute and relative band powers, spectral entropy and
  median frequency. 72 columns per channel.

Degenerate (zero-variance) epochs produce zero sentinels instead of
NaN, so downstream linear algebra never sees non-finite values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .epochs import EpochedRecord
from .errors import CatalogError, DataError
from .spectral import (
    DEFAULT_OVERLAP,
    DEFAULT_WINDOW_S,
    band_power,
    hjorth,
    median_frequency,
    spectral_entropy,
    welch_psd,
)


@dataclass(frozen=True)
class BandDefinition:
    name: str
    lo_hz: float
    hi_hz: float

    def __post_init__(self):
        if not 0 <= self.lo_hz < self.hi_hz:
            raise DataError(f"invalid band {self.name}: [{self.lo_hz}, {self.hi_hz}]")


BANDS = {
    "slow": BandDefinition("slow", 0.5, 2.0),
    "delta": BandDefinition("delta", 0.5, 4.0),
    "theta": BandDefinition("theta", 4.0, 8.0),
    "alpha": BandDefinition("alpha", 8.0, 12.0),
    "sigma": BandDefinition("sigma", 12.0, 16.0),
    "beta": BandDefinition("beta", 8.0, 20.0),
}
BAND_ORDER = ["slow", "delta", "theta", "alpha", "sigma", "beta"]

# Disjoint partition used by the sums-to-one invariant; the catalog's beta
# band (8-20 Hz) overlaps alpha/sigma so it cannot be part of a partition.
PARTITION_EDGES = [0.5, 4.0, 8.0, 12.0, 16.0]

STAT_ORDER = ["mean", "std", "skew", "kurt", "iqr", "zcc", "energy"]
HJORTH_ORDER = ["activity", "mobility", "complexity"]
WINDOW_ORDER = ["full", "h1", "h2"]

_TOKEN_KIND = {
    "relpow": "band_power_rel",
    "abspow": "band_power_abs",
    "bandrms": "statistical",
    "rms": "statistical",
    "p95": "statistical",
    "mean": "statistical",
    "std": "statistical",
    "skew": "statistical",
    "kurt": "statistical",
    "iqr": "statistical",
    "zcc": "statistical",
    "energy": "statistical",
    "medfreq": "statistical",
    "hjorth": "hjorth",
    "specent": "entropy",
    "ratio": "ratio",
    "relpow_mean": "band_power_rel",
    "rms_ratio": "ratio",
}


@dataclass(frozen=True)
class FeatureDescriptor:
    """A named feature column. The name is a deterministic function of the
    fields (channel|window|measure[:qualifier]) and parses back."""

    name: str
    channel: str
    kind: str
    band: BandDefinition | None = None
    stat: str | None = None
    window: str = "full"

    @staticmethod
    def build(channel: str, measure: str, qualifier: str | None = None, window: str = "full"):
        token = measure if qualifier is None else f"{measure}:{qualifier}"
        band = BANDS.get(qualifier) if measure in ("relpow", "abspow", "bandrms", "relpow_mean") else None
        stat = qualifier if measure == "hjorth" else (qualifier if measure == "ratio" else measure)
        return FeatureDescriptor(
            name=f"{channel}|{window}|{token}",
            channel=channel,
            kind=_TOKEN_KIND[measure],
            band=band,
            stat=stat,
            window=window,
        )

    def to_dict(self) -> dict:
        band = None
        if self.band is not None:
            band = {"name": self.band.name, "lo_hz": self.band.lo_hz, "hi_hz": self.band.hi_hz}
        return {
            "name": self.name,
            "channel": self.channel,
            "kind": self.kind,
            "band": band,
            "stat": self.stat,
            "window": self.window,
        }


def parse_descriptor_name(name: str) -> FeatureDescriptor:
    channel, window, token = name.split("|")
    measure, _, qualifier = token.partition(":")
    return FeatureDescriptor.build(channel, measure, qualifier or None, window)


@dataclass
class FeatureMatrix:
    descriptors: list[FeatureDescriptor]
    values: np.ndarray
    labels: list | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2 or self.values.shape[1] != len(self.descriptors):
            raise DataError("feature matrix shape does not match descriptor count")
        if not np.all(np.isfinite(self.values)):
            raise DataError("feature matrix contains non-finite values")

    @property
    def names(self) -> list[str]:
        return [d.name for d in self.descriptors]

    def select_columns(self, indices) -> "FeatureMatrix":
        indices = list(indices)
        return FeatureMatrix(
            descriptors=[self.descriptors[i] for i in indices],
            values=self.values[:, indices],
            labels=self.labels,
        )


_EEG_SITE = re.compile(r"^(FP?[0-9Z]?|[CPOT][0-9Z]?)([-\s_].*)?$")


def channel_role(name: str) -> str | None:
    """EEG / EOG / EMG from the montage vocabulary, None if unrecognized."""
    u = name.upper().strip()
    if "EOG" in u or u.startswith(("ROC", "LOC")):
        return "EOG"
    if "EMG" in u or "CHIN" in u:
        return "EMG"
    if "EEG" in u or _EEG_SITE.match(u):
        return "EEG"
    return None


def featshort_catalog(channel_names) -> list[FeatureDescriptor]:
    desc = []
    roles = {n: channel_role(n) for n in channel_names}
    if not any(roles.values()):
        raise CatalogError(f"no recognizable channels among {list(channel_names)}")
    for n in channel_names:
        role = roles[n]
        if role in ("EEG", "EOG"):
            for b in BAND_ORDER:
                desc.append(FeatureDescriptor.build(n, "relpow", b))
            desc.append(FeatureDescriptor.build(n, "bandrms", "delta"))
            desc.append(FeatureDescriptor.build(n, "bandrms", "sigma"))
            desc.append(FeatureDescriptor.build(n, "rms"))
            if role == "EEG":
                desc.append(FeatureDescriptor.build(n, "ratio", "delta_beta"))
        elif role == "EMG":
            desc.append(FeatureDescriptor.build(n, "rms"))
            desc.append(FeatureDescriptor.build(n, "p95"))
    eeg = [n for n in channel_names if roles[n] == "EEG"]
    emg = [n for n in channel_names if roles[n] == "EMG"]
    if eeg:
        for b in BAND_ORDER:
            desc.append(FeatureDescriptor.build("*EEG", "relpow_mean", b))
        if emg:
            desc.append(FeatureDescriptor.build("*EMG/EEG", "rms_ratio"))
    return desc


def featlong_catalog(channel_names) -> list[FeatureDescriptor]:
    desc = []
    for n in channel_names:
        for window in WINDOW_ORDER:
            for s in STAT_ORDER:
                desc.append(FeatureDescriptor.build(n, s, window=window))
            for h in HJORTH_ORDER:
                desc.append(FeatureDescriptor.build(n, "hjorth", h, window=window))
            for b in BAND_ORDER:
                desc.append(FeatureDescriptor.build(n, "abspow", b, window=window))
            for b in BAND_ORDER:
                desc.append(FeatureDescriptor.build(n, "relpow", b, window=window))
            desc.append(FeatureDescriptor.build(n, "specent", window=window))
            desc.append(FeatureDescriptor.build(n, "medfreq", window=window))
    if not desc:
        raise CatalogError("empty channel list")
    return desc


class _EpochContext:
    """Caches PSDs and band integrals for one epoch across descriptors."""

    def __init__(self, rec: EpochedRecord, epoch_idx: int):
        self.rec = rec
        self.i = epoch_idx
        self._psd = {}
        self._abs = {}

    def signal(self, channel: str, window: str) -> np.ndarray:
        x = self.rec.windows[channel][self.i]
        if window == "h1":
            return x[: len(x) // 2]
        if window == "h2":
            return x[len(x) // 2 :]
        return x

    def psd(self, channel: str, window: str):
        key = (channel, window)
        if key not in self._psd:
            x = self.signal(channel, window)
            fs = self.rec.channel_hz[channel]
            window_s = min(DEFAULT_WINDOW_S, len(x) / fs)
            self._psd[key] = welch_psd(x, fs, window_s=window_s, overlap=DEFAULT_OVERLAP)
        return self._psd[key]

    def abs_power(self, channel: str, window: str, band: BandDefinition) -> float:
        key = (channel, window, band.name)
        if key not in self._abs:
            freqs, density = self.psd(channel, window)
            nyq = freqs[-1]
            lo = min(band.lo_hz, nyq)
            hi = min(band.hi_hz, nyq)
            if hi <= lo:
                self._abs[key] = 0.0
            else:
                self._abs[key] = band_power(freqs, density, lo, hi, relative=False)
        return self._abs[key]

    def total_power(self, channel: str, window: str) -> float:
        freqs, density = self.psd(channel, window)
        nyq = float(freqs[-1])
        return band_power(freqs, density, min(0.5, nyq / 2), nyq, relative=False)


def _stat_value(x: np.ndarray, stat: str) -> float:
    if stat == "mean":
        return float(np.mean(x))
    if stat == "std":
        return float(np.std(x))
    if stat == "iqr":
        return float(np.percentile(x, 75) - np.percentile(x, 25))
    if stat == "zcc":
        return float(np.sum(x[1:] * x[:-1] < 0))
    if stat == "energy":
        return float(np.sum(x * x))
    m2 = np.var(x)
    if m2 == 0.0:
        return 0.0
    centered = x - x.mean()
    if stat == "skew":
        return float(np.mean(centered**3) / m2**1.5)
    if stat == "kurt":
        return float(np.mean(centered**4) / m2**2 - 3.0)
    raise DataError(f"unknown statistic {stat!r}")


def _eval_descriptor(d: FeatureDescriptor, ctx: _EpochContext) -> float:
    token = d.name.split("|")[2]
    measure, _, qualifier = token.partition(":")

    if measure == "relpow_mean":
        vals = [
            _eval_descriptor(FeatureDescriptor.build(n, "relpow", qualifier), ctx)
            for n in ctx.rec.channel_names()
            if channel_role(n) == "EEG"
        ]
        return float(np.mean(vals)) if vals else 0.0
    if measure == "rms_ratio":
        names = ctx.rec.channel_names()
        emg = [np.sqrt(np.mean(ctx.signal(n, "full") ** 2)) for n in names if channel_role(n) == "EMG"]
        eeg = [np.sqrt(np.mean(ctx.signal(n, "full") ** 2)) for n in names if channel_role(n) == "EEG"]
        denom = float(np.mean(eeg)) if eeg else 0.0
        if denom == 0.0 or not emg:
            return 0.0
        return float(np.mean(emg)) / denom

    x = ctx.signal(d.channel, d.window)
    if measure == "rms":
        return float(np.sqrt(np.mean(x * x)))
    if measure == "p95":
        return float(np.percentile(np.abs(x), 95))
    if measure in STAT_ORDER:
        return _stat_value(x, measure)
    if measure == "hjorth":
        act, mob, comp = hjorth(x)
        return {"activity": act, "mobility": mob, "complexity": comp}[qualifier]
    if measure == "specent":
        freqs, density = ctx.psd(d.channel, d.window)
        return spectral_entropy(freqs, density)
    if measure == "medfreq":
        freqs, density = ctx.psd(d.channel, d.window)
        return median_frequency(freqs, density)
    if measure == "abspow":
        return ctx.abs_power(d.channel, d.window, BANDS[qualifier])
    if measure == "relpow":
        total = ctx.total_power(d.channel, d.window)
        if total <= 0.0:
            return 0.0
        return ctx.abs_power(d.channel, d.window, BANDS[qualifier]) / total
    if measure == "bandrms":
        return float(np.sqrt(ctx.abs_power(d.channel, d.window, BANDS[qualifier])))
    if measure == "ratio" and qualifier == "delta_beta":
        beta = ctx.abs_power(d.channel, d.window, BANDS["beta"])
        if beta == 0.0:
            return 0.0
        return ctx.abs_power(d.channel, d.window, BANDS["delta"]) / beta
    raise DataError(f"unknown descriptor token {token!r}")


def _extract(rec: EpochedRecord, descriptors: list[FeatureDescriptor]) -> FeatureMatrix:
    if rec.n_epochs < 1:
        raise CatalogError("record has no epochs")
    values = np.empty((rec.n_epochs, len(descriptors)))
    for i in range(rec.n_epochs):
        ctx = _EpochContext(rec, i)
        for j, d in enumerate(descriptors):
            values[i, j] = _eval_descriptor(d, ctx)
    labels = list(rec.labels) if rec.labels else None
    return FeatureMatrix(descriptors=descriptors, values=values, labels=labels)


def extract_featshort(rec: EpochedRecord) -> FeatureMatrix:
    return _extract(rec, featshort_catalog(rec.channel_names()))


def extract_featlong(rec: EpochedRecord) -> FeatureMatrix:
    return _extract(rec, featlong_catalog(rec.channel_names()))


def extract_many(records, catalog: str) -> FeatureMatrix:
    """Extract one catalog over several records and stack the rows."""
    if catalog not in ("featshort", "featlong"):
        raise CatalogError(f"unknown catalog {catalog!r}")
    extract = extract_featshort if catalog == "featshort" else extract_featlong
    mats = [extract(r) for r in records]
    names = mats[0].names
    for m in mats[1:]:
        if m.names != names:
            raise CatalogError("records disagree on channel montage")
    labels = []
    for m in mats:
        labels.extend(m.labels if m.labels is not None else [None] * m.values.shape[0])
    return FeatureMatrix(
        descriptors=mats[0].descriptors,
        values=np.vstack([m.values for m in mats]),
        labels=labels,
    )

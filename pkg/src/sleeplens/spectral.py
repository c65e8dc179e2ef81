"""Spectral primitives: Welch density estimate, band integrals, Hjorth
parameters, spectral entropy and median frequency.

The Welch normalization is pinned so that sum(density) * df equals the
mean windowed signal power, i.e. mean over segments of
sum((w*x)^2) / sum(w^2) with per-segment mean removal. That identity is
what the band-power tests integrate against.
"""

from __future__ import annotations

import numpy as np

from .errors import BandError, SpectralError

ANALYSIS_LO_HZ = 0.5
DEFAULT_WINDOW_S = 5.0
DEFAULT_OVERLAP = 0.5


def welch_psd(signal, sampling_hz: float, window_s: float = DEFAULT_WINDOW_S, overlap: float = DEFAULT_OVERLAP):
    """Hann-windowed averaged periodogram.

    Returns (freqs, density) one-sided; density units are power per Hz.
    """
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise SpectralError("welch_psd expects a 1-D signal")
    if not 0.0 <= overlap < 1.0:
        raise SpectralError(f"overlap must be in [0, 1), got {overlap}")
    L = int(round(window_s * sampling_hz))
    if L < 2:
        raise SpectralError(f"window of {window_s} s at {sampling_hz} Hz is too short")
    if len(x) < L:
        raise SpectralError(
            f"signal of {len(x)} samples shorter than one {L}-sample window"
        )
    hop = max(1, int(round(L * (1.0 - overlap))))
    n_seg = 1 + (len(x) - L) // hop

    window = np.hanning(L)
    win_power = np.sum(window**2)

    acc = np.zeros(L // 2 + 1)
    for s in range(n_seg):
        seg = x[s * hop : s * hop + L]
        seg = seg - seg.mean()
        spec = np.fft.rfft(seg * window)
        acc += np.abs(spec) ** 2

    density = acc / (n_seg * sampling_hz * win_power)
    # One-sided doubling; DC and (for even L) Nyquist appear once in the
    # full spectrum, so they are not doubled.
    density[1:] *= 2.0
    if L % 2 == 0:
        density[-1] /= 2.0

    freqs = np.fft.rfftfreq(L, d=1.0 / sampling_hz)
    return freqs, density


def _segment_integral(freqs, density, lo: float, hi: float) -> float:
    """Trapezoidal integral of the density over [lo, hi], with the band
    edges interpolated onto the grid so adjacent bands tile exactly."""
    inside = freqs[(freqs > lo) & (freqs < hi)]
    xs = np.concatenate(([lo], inside, [hi]))
    ys = np.interp(xs, freqs, density)
    return float(np.trapezoid(ys, xs))


def band_power(freqs, density, lo_hz: float, hi_hz: float, relative: bool = False) -> float:
    """Integrated density over a band; if relative, divided by the
    integral over the full analyzed range (0.5 Hz to Nyquist)."""
    freqs = np.asarray(freqs)
    density = np.asarray(density)
    nyquist = float(freqs[-1])
    if hi_hz <= lo_hz:
        raise BandError(f"empty band [{lo_hz}, {hi_hz}]")
    if lo_hz < 0 or hi_hz > nyquist + 1e-9:
        raise BandError(
            f"band [{lo_hz}, {hi_hz}] outside the analyzable range [0, {nyquist}]"
        )
    hi_hz = min(hi_hz, nyquist)
    power = _segment_integral(freqs, density, lo_hz, hi_hz)
    if not relative:
        return power
    total = _segment_integral(freqs, density, min(ANALYSIS_LO_HZ, lo_hz), nyquist)
    if total <= 0.0:
        return 0.0  # degenerate flat epoch; sentinel keeps outputs finite
    return power / total


def hjorth(signal):
    """Hjorth activity, mobility, complexity from first differences.

    Zero-variance input returns the (0, 0, 0) sentinel.
    """
    x = np.asarray(signal, dtype=np.float64)
    if len(x) < 3:
        raise SpectralError("hjorth needs at least 3 samples")
    var_x = float(np.var(x))
    if var_x == 0.0:
        return 0.0, 0.0, 0.0
    d1 = np.diff(x)
    d2 = np.diff(d1)
    var_d1 = float(np.var(d1))
    var_d2 = float(np.var(d2))
    mobility = np.sqrt(var_d1 / var_x)
    if var_d1 == 0.0:
        return var_x, mobility, 0.0
    complexity = np.sqrt(var_d2 / var_d1) / mobility
    return var_x, float(mobility), float(complexity)


def spectral_entropy(freqs, density, lo_hz: float = ANALYSIS_LO_HZ) -> float:
    """Normalized Shannon entropy of the density in [lo_hz, Nyquist];
    0 for an all-zero spectrum."""
    mask = freqs >= lo_hz
    p = density[mask]
    total = p.sum()
    if total <= 0.0 or p.size < 2:
        return 0.0
    p = p / total
    nz = p[p > 0]
    h = -np.sum(nz * np.log(nz))
    return float(h / np.log(p.size))


def median_frequency(freqs, density, lo_hz: float = ANALYSIS_LO_HZ) -> float:
    """Frequency below which half the analyzed power lies; 0 if no power."""
    mask = freqs >= lo_hz
    p = density[mask]
    f = freqs[mask]
    total = p.sum()
    if total <= 0.0:
        return 0.0
    cum = np.cumsum(p)
    idx = int(np.searchsorted(cum, 0.5 * total))
    return float(f[min(idx, len(f) - 1)])

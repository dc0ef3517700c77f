"""Core signal types, Welch spectral estimation and elementary sequence analysis."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import welch


class SizingError(ValueError):
    """Input too short for the requested operation."""


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled real-valued signal with its sampling rate in Hz."""

    samples: np.ndarray
    fs: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1 or samples.size < 2:
            raise ValueError("samples must be a 1-D sequence of length >= 2")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        if not (self.fs > 0):
            raise ValueError("fs must be positive")

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        return (self.samples.size - 1) / self.fs

    def rms(self) -> float:
        return float(np.sqrt(np.mean(self.samples**2)))


def check_aligned(a: TimeSeries, b: TimeSeries) -> None:
    """Binary operations require equal length and sampling rate."""
    if len(a) != len(b) or a.fs != b.fs:
        raise ValueError(
            f"signals not aligned: lengths {len(a)}/{len(b)}, fs {a.fs}/{b.fs}"
        )


@dataclass(frozen=True)
class SpectralDensity:
    """One-sided PSD estimate: frequency grid (Hz) and power per Hz."""

    freqs: np.ndarray
    power: np.ndarray

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype=float)
        power = np.asarray(self.power, dtype=float)
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "power", power)
        if freqs.shape != power.shape or freqs.ndim != 1:
            raise ValueError("freqs and power must be 1-D with equal length")
        if freqs[0] != 0.0 or np.any(np.diff(freqs) <= 0):
            raise ValueError("freqs must start at 0 and be strictly increasing")
        if not np.all(np.isfinite(power)) or np.any(power < 0):
            raise ValueError("power must be finite and non-negative")

    def total_power(self) -> float:
        return float(np.sum(self.power))


@dataclass(frozen=True, order=True)
class FrequencyBand:
    """Half-open frequency interval [lo, hi) in Hz."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (0 <= self.lo < self.hi):
            raise ValueError(f"invalid band [{self.lo}, {self.hi})")

    def __str__(self) -> str:
        return f"{self.lo:g}-{self.hi:g}"


# Evaluation bands used when splitting PSD differences by frequency.
CANONICAL_BANDS: tuple[FrequencyBand, ...] = tuple(
    FrequencyBand(lo, hi)
    for lo, hi in [
        (0, 2.5),
        (2.5, 5),
        (5, 7.5),
        (7.5, 10),
        (10, 15),
        (15, 20),
        (20, 25),
        (25, 30),
    ]
)

DEFAULT_SEGMENT_SECONDS = 1.0
DEFAULT_OVERLAP_FRACTION = 0.5


def welch_psd(
    x: TimeSeries,
    segment_seconds: float = DEFAULT_SEGMENT_SECONDS,
    overlap_fraction: float = DEFAULT_OVERLAP_FRACTION,
) -> SpectralDensity:
    """Welch-averaged one-sided PSD with Hann-tapered segments.

    No detrending is applied, so summed power stays Parseval-consistent
    with the time-domain mean square.
    """
    if not (0 <= overlap_fraction < 1):
        raise ValueError("overlap_fraction must be in [0, 1)")
    nperseg = int(round(segment_seconds * x.fs))
    nperseg -= nperseg % 2  # even segment so the grid ends exactly at fs/2
    if nperseg < 8:
        raise SizingError("segment must span at least 8 samples")
    if len(x) < nperseg:
        raise SizingError(
            f"signal of {len(x)} samples shorter than one {nperseg}-sample segment"
        )
    freqs, power = welch(
        x.samples,
        fs=x.fs,
        window="hann",
        nperseg=nperseg,
        noverlap=int(nperseg * overlap_fraction),
        detrend=False,
    )
    return SpectralDensity(freqs, power)


def mean_power_frequency(psd: SpectralDensity) -> float:
    """Power-weighted mean frequency of a PSD, in Hz."""
    total = np.sum(psd.power)
    if total <= 0:
        raise ValueError("empty spectrum")
    return float(np.sum(psd.freqs * psd.power) / total)


def band_power(psd: SpectralDensity, band: FrequencyBand) -> float:
    """Sum of power bins with center frequency in [lo, hi).

    A band whose upper edge equals the last grid frequency (Nyquist)
    includes that final bin, so contiguous bands partition the spectrum.
    """
    if band.lo > psd.freqs[-1]:
        raise ValueError(f"band {band} outside spectrum (max {psd.freqs[-1]:g} Hz)")
    mask = (psd.freqs >= band.lo) & (psd.freqs < band.hi)
    if band.hi == psd.freqs[-1]:
        mask |= psd.freqs == band.hi
    return float(np.sum(psd.power[mask]))


def count_extrema_and_zero_crossings(x) -> tuple[int, int]:
    """Count strict local extrema (plateaus once) and sign changes.

    Exact zeros between samples of identical sign do not create crossings.
    """
    x = np.asarray(x, dtype=float)
    if x.size < 3:
        raise ValueError("sequence must have length >= 3")
    maxima, minima = find_extrema(x)
    signs = np.sign(x)
    signs = signs[signs != 0]
    crossings = int(np.count_nonzero(signs[:-1] != signs[1:]))
    return maxima.size + minima.size, crossings


def find_extrema(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Indices of strict local maxima and minima; plateau counted at its center."""
    dx = np.diff(x)
    nz = np.nonzero(dx)[0]
    if nz.size < 2:
        return np.empty(0, dtype=int), np.empty(0, dtype=int)
    slope = np.sign(dx[nz])
    change = np.nonzero(slope[:-1] != slope[1:])[0]
    # extremum lies on the plateau between the two slope changes
    pos = (nz[change] + 1 + nz[change + 1]) // 2
    return pos[slope[change] > 0], pos[slope[change] < 0]

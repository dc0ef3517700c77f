"""Spectral fuzzy-entropy IMF scoring and MMG/motion recomposition."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .core import SizingError, TimeSeries, welch_psd
from .emd import Decomposition, Imf

# spectral scoring only looks below this frequency; MMG energy lives well
# under it and higher bins would dilute the score with numerical noise
SPECTRAL_FUZZEN_MAX_HZ = 100.0


@dataclass(frozen=True)
class FuzzEnParams:
    """Embedding dimension, relative tolerance and fuzzy membership power."""

    m: int = 2
    r: float = 0.2
    n: float = 2.0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("embedding dimension m must be >= 1")
        if not self.r > 0 or not self.n > 0:
            raise ValueError("tolerance r and power n must be positive")


@dataclass(frozen=True)
class MmgSeparation:
    """Filtered MMG signal, recomposed motion signal and selection metadata.

    mmg + motion reconstructs the raw input exactly. `selected` is the
    1-based inclusive IMF range summed into the MMG signal (None for the
    band-pass method, which has no IMFs).
    """

    mmg: TimeSeries
    motion: TimeSeries
    scores: tuple[float, ...]
    selected: tuple[int, int] | None
    method: str  # "CEEMDAN_FUZZEN" or "BANDPASS"


def _mean_pair_similarity(x: np.ndarray, length: int, count: int, r_abs: float, n: float) -> float:
    """Average exp(-(d/r)^n) over distinct template pairs; Chebyshev distance,
    per-template baseline removed."""
    t = sliding_window_view(x, length)[:count].astype(float)
    t = t - t.mean(axis=1, keepdims=True)
    d = np.abs(t[:, None, :] - t[None, :, :]).max(axis=2)
    iu = np.triu_indices(count, k=1)
    return float(np.mean(np.exp(-((d[iu] / r_abs) ** n))))


def fuzzy_entropy(seq, p: FuzzEnParams = FuzzEnParams()) -> float:
    """Fuzzy entropy of a sequence: ln(phi_m) - ln(phi_{m+1}).

    Both template lengths use the same template count (len - m - 1 + 1) so
    the two similarity averages are comparable. Zero-variance sequences are
    perfectly regular and score 0 by convention.
    """
    x = np.asarray(seq, dtype=float)
    if x.size < p.m + 2:
        raise SizingError(f"sequence of {x.size} too short for m={p.m}")
    sd = float(np.std(x))
    if sd == 0:
        return 0.0
    r_abs = p.r * sd
    count = x.size - p.m
    phi_m = _mean_pair_similarity(x, p.m, count, r_abs, p.n)
    phi_m1 = _mean_pair_similarity(x, p.m + 1, count, r_abs, p.n)
    return float(np.log(phi_m) - np.log(phi_m1))


def spectral_fuzzen(imf: Imf, fs: float, p: FuzzEnParams = FuzzEnParams()) -> float:
    """Fuzzy entropy of an IMF's unit-sum normalized PSD below 100 Hz.

    Amplitude-invariant: the PSD is normalized and the entropy tolerance
    scales with the sequence's own spread.
    """
    samples = np.asarray(imf.samples, dtype=float)
    if not np.any(samples):
        return 0.0
    psd = welch_psd(TimeSeries(samples, fs))
    keep = psd.freqs <= SPECTRAL_FUZZEN_MAX_HZ
    power = psd.power[keep]
    total = power.sum()
    if total == 0:
        return 0.0
    return fuzzy_entropy(power / total, p)


def select_cut(scores, theta: float) -> tuple[int, int]:
    """Selection rule on a score sequence: returns (argmax index, cut index),
    both 0-based. The cut extends from the argmax toward higher order while
    scores stay at or above theta times the maximum."""
    if not (0 < theta <= 1):
        raise ValueError("theta must be in (0, 1]")
    k_star = int(np.argmax(scores))  # ties resolve to the smaller index
    cut = k_star
    for j in range(k_star + 1, len(scores)):
        if scores[j] >= theta * scores[k_star]:
            cut = j
        else:
            break
    return k_star, cut


# IMFs carrying less than this fraction of the raw signal's energy are
# ensemble-averaging residue, not content; their flat spectra would
# otherwise win the entropy argmax on noise-free inputs
DEGENERATE_ENERGY_FLOOR = 1e-4


def separate_ceemdan(
    raw: TimeSeries,
    d: Decomposition,
    p: FuzzEnParams = FuzzEnParams(),
    theta: float = 0.5,
    energy_floor: float = DEGENERATE_ENERGY_FLOOR,
) -> MmgSeparation:
    """Split a decomposition of `raw` into MMG and motion signals.

    All IMFs are scored with spectral fuzzy entropy; near-zero IMFs score 0
    (energy below `energy_floor` of the raw signal). The MMG block is
    IMFs 1..c where c extends from the argmax-score IMF toward higher
    order while scores stay above theta times the maximum; everything
    above c plus the residual is the recomposed motion.
    """
    if not d.imfs:
        raise ValueError("decomposition has no IMFs")
    if d.source_fs != raw.fs or d.residual.size != len(raw):
        raise ValueError("decomposition does not match the raw signal")
    e_raw = float(np.sum(raw.samples**2))
    scores = tuple(
        spectral_fuzzen(imf, raw.fs, p)
        if np.sum(imf.samples**2) >= energy_floor * e_raw
        else 0.0
        for imf in d.imfs
    )
    _, cut = select_cut(scores, theta)
    mmg = np.sum([imf.samples for imf in d.imfs[: cut + 1]], axis=0)
    motion = d.residual.copy()
    for imf in d.imfs[cut + 1 :]:
        motion += imf.samples
    return MmgSeparation(
        mmg=TimeSeries(mmg, raw.fs),
        motion=TimeSeries(motion, raw.fs),
        scores=scores,
        selected=(1, cut + 1),
        method="CEEMDAN_FUZZEN",
    )

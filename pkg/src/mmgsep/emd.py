"""Empirical mode decomposition: envelope construction, sifting, IMF extraction."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .core import TimeSeries, count_extrema_and_zero_crossings, find_extrema


class MonotoneComponentError(ValueError):
    """Signal has fewer than two maxima or two minima; no envelope exists."""


@dataclass(frozen=True)
class SiftConfig:
    """Sifting controls: Cauchy SD stop threshold, iteration and mode caps."""

    sd_threshold: float = 0.2
    max_sifts: int = 100
    max_imfs: int = 12

    def __post_init__(self):
        if not self.sd_threshold > 0:
            raise ValueError("sd_threshold must be positive")
        if self.max_sifts < 1 or self.max_imfs < 1:
            raise ValueError("max_sifts and max_imfs must be >= 1")


@dataclass(frozen=True)
class Imf:
    """One intrinsic mode; index 1 is the highest-frequency mode."""

    samples: np.ndarray
    index: int


@dataclass(frozen=True)
class Decomposition:
    """Ordered IMFs plus residual, with the parameters that produced them."""

    imfs: tuple[Imf, ...]
    residual: np.ndarray
    method: str  # "EMD" or "CEEMDAN"
    params: object
    source_fs: float

    def reconstruct(self) -> np.ndarray:
        out = self.residual.copy()
        for imf in self.imfs:
            out += imf.samples
        return out

    def imf_matrix(self) -> np.ndarray:
        """Stack of IMF rows followed by the residual row."""
        rows = [imf.samples for imf in self.imfs] + [self.residual]
        return np.vstack(rows)


def _mirrored_knots(idx: np.ndarray, val: np.ndarray, n: int):
    """Reflect up to two outermost extrema across each signal edge."""
    left = idx[:2] > 0
    right = idx[-2:] < n - 1
    xi = np.concatenate([(-idx[:2][left])[::-1], idx, (2 * (n - 1) - idx[-2:][right])[::-1]])
    yi = np.concatenate([val[:2][left][::-1], val, val[-2:][right][::-1]])
    xi, keep = np.unique(xi, return_index=True)
    return xi, yi[keep]


def envelopes(x) -> tuple[np.ndarray, np.ndarray]:
    """Natural cubic-spline envelopes through local maxima and minima.

    Edge behaviour comes from mirroring the two outermost extrema across
    each boundary; spline overshoot between knots is allowed.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    maxima, minima = find_extrema(x)
    if maxima.size < 2 or minima.size < 2:
        raise MonotoneComponentError(
            f"monotone component: {maxima.size} maxima, {minima.size} minima"
        )
    t = np.arange(n)
    xi, yi = _mirrored_knots(maxima, x[maxima], n)
    upper = CubicSpline(xi, yi, bc_type="natural")(t)
    xi, yi = _mirrored_knots(minima, x[minima], n)
    lower = CubicSpline(xi, yi, bc_type="natural")(t)
    return upper, lower


def local_mean(x) -> np.ndarray:
    """Mean of the upper and lower envelopes."""
    upper, lower = envelopes(x)
    return 0.5 * (upper + lower)


def _imf_criterion_ok(h: np.ndarray) -> bool:
    extrema, crossings = count_extrema_and_zero_crossings(h)
    return abs(extrema - crossings) <= 1


def _sift(r: np.ndarray, cfg: SiftConfig) -> np.ndarray | None:
    """Sift one mode out of r; None when r is already a residual."""
    h = r
    for _ in range(cfg.max_sifts):
        try:
            m = local_mean(h)
        except MonotoneComponentError:
            # lost its oscillatory structure mid-sift; keep what we have
            return None if h is r else h
        h_prev = h
        h = h - m
        sd = np.sum(m * m) / np.sum(h_prev * h_prev)
        if sd < cfg.sd_threshold and _imf_criterion_ok(h):
            break
    return h


def extract_imfs(x: TimeSeries, cfg: SiftConfig = SiftConfig()) -> Decomposition:
    """Classical EMD: repeatedly sift modes off the running residual.

    Completeness is exact by construction; each accepted IMF is literally
    subtracted from the residual.
    """
    r = x.samples.copy()
    imfs: list[Imf] = []
    while len(imfs) < cfg.max_imfs:
        mode = _sift(r, cfg)
        if mode is None:
            break
        imfs.append(Imf(mode, len(imfs) + 1))
        r = r - mode
        maxima, minima = find_extrema(r)
        if maxima.size + minima.size < 3:
            break
    return Decomposition(tuple(imfs), r, "EMD", cfg, x.fs)

"""Scikit-learn style estimator front-ends over the functional core.

Signals are 1-D arrays; transforms return stacked 2-D arrays so the
estimators compose with sklearn pipelines and `clone`/`get_params`.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .bandpass import separate_bandpass
from .ceemdan import DecompParams, decompose_iceemdan
from .core import TimeSeries
from .emd import SiftConfig, extract_imfs
from .selection import FuzzEnParams, separate_ceemdan


def _as_signal(X) -> np.ndarray:
    x = np.asarray(X, dtype=float)
    if x.ndim == 2 and 1 in x.shape:
        x = x.ravel()
    if x.ndim != 1:
        raise ValueError("expected a single 1-D signal")
    return x


class EmdDecomposer(TransformerMixin, BaseEstimator):
    """Classical EMD as a transformer: signal -> rows of IMFs plus residual."""

    def __init__(self, fs=1000.0, sd_threshold=0.2, max_sifts=100, max_imfs=12):
        self.fs = fs
        self.sd_threshold = sd_threshold
        self.max_sifts = max_sifts
        self.max_imfs = max_imfs

    def _sift_config(self) -> SiftConfig:
        return SiftConfig(self.sd_threshold, self.max_sifts, self.max_imfs)

    def fit(self, X, y=None):
        _as_signal(X)
        return self

    def transform(self, X) -> np.ndarray:
        x = TimeSeries(_as_signal(X), self.fs)
        self.decomposition_ = extract_imfs(x, self._sift_config())
        return self.decomposition_.imf_matrix()


class CeemdanDecomposer(TransformerMixin, BaseEstimator):
    """Improved-CEEMDAN decomposition as a transformer.

    Output is deterministic in (signal, params); `workers` only controls
    parallelism.
    """

    def __init__(
        self,
        fs=1000.0,
        ensemble_size=100,
        noise_amplitude=0.2,
        seed=0,
        sd_threshold=0.2,
        max_sifts=100,
        max_imfs=12,
        workers=1,
    ):
        self.fs = fs
        self.ensemble_size = ensemble_size
        self.noise_amplitude = noise_amplitude
        self.seed = seed
        self.sd_threshold = sd_threshold
        self.max_sifts = max_sifts
        self.max_imfs = max_imfs
        self.workers = workers

    def _params(self) -> DecompParams:
        return DecompParams(
            ensemble_size=self.ensemble_size,
            noise_amplitude=self.noise_amplitude,
            seed=self.seed,
            sift=SiftConfig(self.sd_threshold, self.max_sifts, self.max_imfs),
        )

    def fit(self, X, y=None):
        _as_signal(X)
        return self

    def transform(self, X) -> np.ndarray:
        x = TimeSeries(_as_signal(X), self.fs)
        self.decomposition_ = decompose_iceemdan(x, self._params(), workers=self.workers)
        return self.decomposition_.imf_matrix()


class MmgSeparator(TransformerMixin, BaseEstimator):
    """MMG/motion separation: transform returns a (2, n) array [mmg, motion].

    method="ceemdan" decomposes with improved CEEMDAN and selects IMFs by
    spectral fuzzy entropy; method="bandpass" applies the 5-100 Hz
    Butterworth reference with motion by subtraction.
    """

    def __init__(
        self,
        method="ceemdan",
        fs=1000.0,
        ensemble_size=100,
        noise_amplitude=0.2,
        seed=0,
        theta=0.5,
        fuzzen_m=2,
        fuzzen_r=0.2,
        fuzzen_n=2.0,
        band_lo=5.0,
        band_hi=100.0,
        band_order=4,
        workers=1,
    ):
        self.method = method
        self.fs = fs
        self.ensemble_size = ensemble_size
        self.noise_amplitude = noise_amplitude
        self.seed = seed
        self.theta = theta
        self.fuzzen_m = fuzzen_m
        self.fuzzen_r = fuzzen_r
        self.fuzzen_n = fuzzen_n
        self.band_lo = band_lo
        self.band_hi = band_hi
        self.band_order = band_order
        self.workers = workers

    def fit(self, X, y=None):
        if self.method not in ("ceemdan", "bandpass"):
            raise ValueError(f"unknown method {self.method!r}")
        _as_signal(X)
        return self

    def transform(self, X) -> np.ndarray:
        self.fit(X)
        raw = TimeSeries(_as_signal(X), self.fs)
        if self.method == "bandpass":
            sep = separate_bandpass(raw, self.band_lo, self.band_hi, self.band_order)
        else:
            decomp = decompose_iceemdan(
                raw,
                DecompParams(self.ensemble_size, self.noise_amplitude, self.seed),
                workers=self.workers,
            )
            sep = separate_ceemdan(
                raw,
                decomp,
                FuzzEnParams(self.fuzzen_m, self.fuzzen_r, self.fuzzen_n),
                theta=self.theta,
            )
        self.separation_ = sep
        self.scores_ = np.asarray(sep.scores)
        self.selected_ = sep.selected
        return np.vstack([sep.mmg.samples, sep.motion.samples])

"""Motion-artifact separation for accelerometric MMG signals.

Improved-CEEMDAN decomposition with spectral fuzzy-entropy IMF selection,
a Butterworth band-pass reference, evaluation metrics, synthetic
ground-truth generators and gait segmentation.
"""

from .bandpass import IirFilter, design_butterworth_bandpass, filtfilt, separate_bandpass
from .ceemdan import DecompParams, NoiseBank, decompose_iceemdan, noise_mode
from .core import (
    CANONICAL_BANDS,
    FrequencyBand,
    SpectralDensity,
    TimeSeries,
    band_power,
    count_extrema_and_zero_crossings,
    mean_power_frequency,
    welch_psd,
)
from .emd import Decomposition, Imf, MonotoneComponentError, SiftConfig, envelopes, extract_imfs, local_mean
from .estimators import CeemdanDecomposer, EmdDecomposer, MmgSeparator
from .gait import WalkWindow, inclination_angle, walking_windows
from .metrics import ComparisonReport, compare_methods, delta_psd, r_squared
from .selection import FuzzEnParams, MmgSeparation, fuzzy_entropy, separate_ceemdan, spectral_fuzzen
from .synth import STANDARD_RECIPE, SyntheticTrial, gen_impacts, gen_mmg, gen_motion, make_trial, mix

__version__ = "0.1.0"

__all__ = [
    "CANONICAL_BANDS",
    "CeemdanDecomposer",
    "ComparisonReport",
    "DecompParams",
    "Decomposition",
    "EmdDecomposer",
    "FrequencyBand",
    "FuzzEnParams",
    "Imf",
    "IirFilter",
    "MmgSeparation",
    "MmgSeparator",
    "MonotoneComponentError",
    "NoiseBank",
    "STANDARD_RECIPE",
    "SiftConfig",
    "SpectralDensity",
    "SyntheticTrial",
    "TimeSeries",
    "WalkWindow",
    "band_power",
    "compare_methods",
    "count_extrema_and_zero_crossings",
    "decompose_iceemdan",
    "delta_psd",
    "design_butterworth_bandpass",
    "envelopes",
    "extract_imfs",
    "filtfilt",
    "fuzzy_entropy",
    "gen_impacts",
    "gen_mmg",
    "gen_motion",
    "inclination_angle",
    "local_mean",
    "make_trial",
    "mean_power_frequency",
    "mix",
    "noise_mode",
    "r_squared",
    "separate_bandpass",
    "separate_ceemdan",
    "spectral_fuzzen",
    "walking_windows",
    "welch_psd",
]

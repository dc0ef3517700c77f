"""Separation-quality metrics and per-trial comparison reports."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    CANONICAL_BANDS,
    FrequencyBand,
    TimeSeries,
    check_aligned,
    mean_power_frequency,
    welch_psd,
)
from .selection import MmgSeparation


@dataclass(frozen=True)
class ComparisonReport:
    """Per-trial metrics for one separation method."""

    method: str
    r_squared: float
    delta_psd: dict[FrequencyBand, float]
    mpf_filtered: float
    rms_filtered: float
    rms_raw: float
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "r_squared": self.r_squared,
            "delta_psd": {str(b): v for b, v in self.delta_psd.items()},
            "mpf_filtered_hz": self.mpf_filtered,
            "rms_filtered": self.rms_filtered,
            "rms_raw": self.rms_raw,
            "metadata": self.metadata,
        }


def r_squared(estimate: TimeSeries, reference: TimeSeries) -> float:
    """Coefficient of determination of `estimate` against `reference`.

    Can be negative for estimates worse than the reference mean.
    """
    check_aligned(estimate, reference)
    ref = reference.samples
    ss_tot = float(np.sum((ref - ref.mean()) ** 2))
    if ss_tot == 0:
        raise ValueError("undefined R²: reference has zero variance")
    ss_res = float(np.sum((ref - estimate.samples) ** 2))
    return 1.0 - ss_res / ss_tot


def delta_psd(
    filtered: TimeSeries,
    raw: TimeSeries,
    bands: tuple[FrequencyBand, ...] = CANONICAL_BANDS,
) -> dict[FrequencyBand, float]:
    """Per-band sum of bin-wise |PSD_raw - PSD_filtered|.

    Bin-wise absolute differencing, not band-power differencing, so
    opposite-signed bins cannot cancel.
    """
    check_aligned(filtered, raw)
    p_raw = welch_psd(raw)
    p_filt = welch_psd(filtered)
    diff = np.abs(p_raw.power - p_filt.power)
    out = {}
    for band in bands:
        mask = (p_raw.freqs >= band.lo) & (p_raw.freqs < band.hi)
        out[band] = float(np.sum(diff[mask]))
    return out


def _report(
    raw: TimeSeries,
    reference_motion: TimeSeries,
    sep: MmgSeparation,
    metadata: dict,
) -> ComparisonReport:
    return ComparisonReport(
        method=sep.method,
        r_squared=r_squared(sep.motion, reference_motion),
        delta_psd=delta_psd(sep.mmg, raw),
        mpf_filtered=mean_power_frequency(welch_psd(sep.mmg)),
        rms_filtered=sep.mmg.rms(),
        rms_raw=raw.rms(),
        metadata=metadata,
    )


def compare_methods(
    raw: TimeSeries,
    reference_motion: TimeSeries,
    sep_a: MmgSeparation,
    sep_b: MmgSeparation,
    metadata: dict | None = None,
) -> tuple[ComparisonReport, ComparisonReport]:
    """Build both reports; each carries the RMS ratio between methods so
    relative amplitude reduction is recomputable."""
    check_aligned(raw, reference_motion)
    meta = dict(metadata or {})
    rms_a, rms_b = sep_a.mmg.rms(), sep_b.mmg.rms()
    meta_a = {**meta, "rms_ratio_vs_other": rms_a / rms_b if rms_b else float("inf")}
    meta_b = {**meta, "rms_ratio_vs_other": rms_b / rms_a if rms_a else float("inf")}
    return (
        _report(raw, reference_motion, sep_a, meta_a),
        _report(raw, reference_motion, sep_b, meta_b),
    )

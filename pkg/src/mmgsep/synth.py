"""Ground-truth synthetic signals: motion artifacts, MMG-like band noise,
impact transients and their labeled mixtures."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import TimeSeries, check_aligned

MOTION_BAND_CAP_HZ = 15.0
MMG_BAND = (5.0, 60.0)
IMPACT_BAND = (10.0, 30.0)

# canonical mixture used across the acceptance suite
STANDARD_RECIPE = {
    "fs": 1000.0,
    "duration": 10.0,
    "motion_f_lo": 0.5,
    "motion_f_hi": 8.0,
    "motion_rms": 3.0,
    "mmg_target_mpf": 16.0,
    "mmg_rms": 1.0,
    "impact_rate": 0.0,
    "seed": 42,
}


@dataclass(frozen=True)
class SyntheticTrial:
    """Labeled mixture: raw equals the sample-wise sum of the components."""

    raw: TimeSeries
    truth_motion: TimeSeries
    truth_mmg: TimeSeries
    truth_impacts: TimeSeries
    recipe: dict


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64([seed, stream]))


def gen_motion(
    fs: float,
    duration: float,
    f_lo: float,
    f_hi: float,
    amplitude: float,
    seed: int,
) -> TimeSeries:
    """Low-frequency motion artifact: slow chirp f_lo -> f_hi plus seeded
    sinusoids; `amplitude` is the output RMS."""
    if not (0 < f_lo < f_hi <= MOTION_BAND_CAP_HZ):
        raise ValueError(
            f"motion band must satisfy 0 < f_lo < f_hi <= {MOTION_BAND_CAP_HZ} Hz"
        )
    if duration < 2:
        raise ValueError("duration must be >= 2 s")
    n = int(round(duration * fs))
    t = np.arange(n) / fs
    rng = _rng(seed, 1)
    # linear chirp: instantaneous frequency f_lo -> f_hi over the record
    phase = 2 * np.pi * (f_lo * t + (f_hi - f_lo) * t**2 / (2 * duration))
    x = np.sin(phase + rng.uniform(0, 2 * np.pi))
    for f_sin in (1.2, 2.7):
        if f_sin < f_hi:
            x += 0.6 * np.sin(2 * np.pi * f_sin * t + rng.uniform(0, 2 * np.pi))
    if amplitude == 0:
        return TimeSeries(np.zeros(n), fs)
    x *= amplitude / np.sqrt(np.mean(x**2))
    return TimeSeries(x, fs)


def _mmg_shape(freqs: np.ndarray, center: float, width: float = 8.0) -> np.ndarray:
    w = np.exp(-((freqs - center) ** 2) / (2 * width**2))
    w[(freqs < MMG_BAND[0]) | (freqs > MMG_BAND[1])] = 0.0
    return w


def _mmg_centroid(freqs: np.ndarray, center: float) -> float:
    w2 = _mmg_shape(freqs, center) ** 2
    return float(np.sum(freqs * w2) / np.sum(w2))


def gen_mmg(
    fs: float,
    duration: float,
    target_mpf: float,
    amplitude_rms: float,
    seed: int,
) -> TimeSeries:
    """MMG-like noise: Gaussian noise shaped to a 5-60 Hz bump whose spectral
    centroid lands at `target_mpf`; output RMS equals `amplitude_rms`."""
    if not (5 <= target_mpf <= 30):
        raise ValueError("target_mpf must be in [5, 30] Hz")
    n = int(round(duration * fs))
    freqs = np.fft.rfftfreq(n, 1 / fs)
    # bisect the bump center so the shaped-PSD centroid hits the target
    lo, hi = -40.0, 80.0
    if not (_mmg_centroid(freqs, lo) <= target_mpf <= _mmg_centroid(freqs, hi)):
        raise ValueError(f"target MPF {target_mpf} Hz infeasible for the 5-60 Hz shape")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if _mmg_centroid(freqs, mid) < target_mpf:
            lo = mid
        else:
            hi = mid
    shape = _mmg_shape(freqs, 0.5 * (lo + hi))
    rng = _rng(seed, 2)
    spectrum = np.fft.rfft(rng.standard_normal(n)) * shape
    x = np.fft.irfft(spectrum, n)
    rms = np.sqrt(np.mean(x**2))
    if rms == 0 or amplitude_rms == 0:
        return TimeSeries(np.zeros(n), fs)
    return TimeSeries(x * (amplitude_rms / rms), fs)


def gen_impacts(fs: float, duration: float, rate: float, seed: int, amplitude: float = 1.0) -> TimeSeries:
    """Poisson train of damped oscillatory transients with energy in 10-30 Hz."""
    n = int(round(duration * fs))
    x = np.zeros(n)
    if rate <= 0:
        return TimeSeries(x, fs)
    if rate * duration < 1:
        raise ValueError("expected event count rate*duration must be >= 1")
    rng = _rng(seed, 3)
    count = rng.poisson(rate * duration)
    starts = np.sort(rng.uniform(0, duration, size=count))
    t_pulse = np.arange(int(0.15 * fs)) / fs
    t_end = t_pulse[-1] + 1 / fs
    # smooth attack and tail fade keep the spectrum from smearing outside
    # the impact band; the pulse is fully decayed within 150 ms
    attack = np.sin(np.pi * np.minimum(t_pulse / 0.015, 1.0) / 2) ** 2
    fade = np.ones_like(t_pulse)
    tail = t_pulse > t_end - 0.05
    fade[tail] = np.cos(np.pi * (t_pulse[tail] - (t_end - 0.05)) / 0.05 / 2) ** 2
    envelope = attack * np.exp(-t_pulse / 0.06) * fade
    for start in starts:
        f_osc = rng.uniform(16.0, 24.0)
        pulse = amplitude * envelope * np.sin(2 * np.pi * f_osc * t_pulse)
        i0 = int(round(start * fs))
        seg = pulse[: max(0, n - i0)]
        x[i0 : i0 + seg.size] += seg
    return TimeSeries(x, fs)


def mix(motion: TimeSeries, mmg: TimeSeries, impacts: TimeSeries, recipe: dict | None = None) -> SyntheticTrial:
    """Exact sample-wise sum of the labeled components."""
    check_aligned(motion, mmg)
    check_aligned(motion, impacts)
    raw = TimeSeries(motion.samples + mmg.samples + impacts.samples, motion.fs)
    return SyntheticTrial(
        raw=raw,
        truth_motion=motion,
        truth_mmg=mmg,
        truth_impacts=impacts,
        recipe=dict(recipe or {}),
    )


def make_trial(recipe: dict | None = None) -> SyntheticTrial:
    """Generate a labeled trial from a recipe (defaults: the standard mixture)."""
    r = {**STANDARD_RECIPE, **(recipe or {})}
    fs, duration, seed = r["fs"], r["duration"], r["seed"]
    motion = gen_motion(fs, duration, r["motion_f_lo"], r["motion_f_hi"], r["motion_rms"], seed)
    mmg = gen_mmg(fs, duration, r["mmg_target_mpf"], r["mmg_rms"], seed)
    if r["impact_rate"] > 0:
        impacts = gen_impacts(fs, duration, r["impact_rate"], seed, r.get("impact_amplitude", 1.0))
    else:
        impacts = TimeSeries(np.zeros(len(motion)), fs)
    return mix(motion, mmg, impacts, r)

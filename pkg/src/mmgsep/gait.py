"""Walking-phase selection from trunk accelerometer inclination angle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal

from .core import TimeSeries

GRAVITY = 9.81
DEFAULT_GRAVITY_CUTOFF_HZ = 1.0
DEFAULT_ANGLE_RANGE_DEG = (-10.0, 10.0)
DEFAULT_MIN_DURATION_S = 0.5


@dataclass(frozen=True)
class WalkWindow:
    """Half-open sample range [start, end) classified as walking."""

    start: int
    end: int

    def __post_init__(self):
        if not (0 <= self.start < self.end):
            raise ValueError("window must satisfy 0 <= start < end")


def inclination_angle(
    acc_z: TimeSeries, gravity_cutoff: float = DEFAULT_GRAVITY_CUTOFF_HZ
) -> TimeSeries:
    """Frontal-plane trunk inclination in degrees from the Z acceleration.

    The gravity projection is the zero-phase low-passed signal; dynamic
    excursions beyond +-g are clamped before the arcsin.
    """
    if not (0.1 < gravity_cutoff < 3):
        raise ValueError("gravity_cutoff must be in (0.1, 3) Hz")
    sos = signal.butter(2, gravity_cutoff, btype="lowpass", fs=acc_z.fs, output="sos")
    g_z = signal.sosfiltfilt(sos, acc_z.samples)
    angle = np.degrees(np.arcsin(np.clip(g_z / GRAVITY, -1.0, 1.0)))
    return TimeSeries(angle, acc_z.fs)


def walking_windows(
    angle: TimeSeries,
    lo: float = DEFAULT_ANGLE_RANGE_DEG[0],
    hi: float = DEFAULT_ANGLE_RANGE_DEG[1],
    min_duration: float = DEFAULT_MIN_DURATION_S,
) -> list[WalkWindow]:
    """Maximal runs with lo <= angle <= hi, dropping runs shorter than
    min_duration seconds."""
    if lo >= hi:
        raise ValueError("lo must be below hi")
    if min_duration < 0:
        raise ValueError("min_duration must be >= 0")
    inside = (angle.samples >= lo) & (angle.samples <= hi)
    edges = np.diff(inside.astype(int))
    starts = list(np.nonzero(edges == 1)[0] + 1)
    ends = list(np.nonzero(edges == -1)[0] + 1)
    if inside[0]:
        starts.insert(0, 0)
    if inside[-1]:
        ends.append(len(angle))
    min_samples = int(np.ceil(min_duration * angle.fs))
    return [
        WalkWindow(int(s), int(e))
        for s, e in zip(starts, ends)
        if e - s >= max(1, min_samples)
    ]

import numpy as np
import pytest

from mmgsep import TimeSeries


@pytest.fixture
def fs():
    return 1000.0


def tone(freq, fs=1000.0, duration=5.0, amplitude=1.0, phase=0.1):
    """Sine with a small phase offset so no sample sits exactly on zero."""
    t = np.arange(int(round(duration * fs))) / fs
    return amplitude * np.sin(2 * np.pi * freq * t + phase)


@pytest.fixture
def two_tone_signal(fs):
    return TimeSeries(tone(2, fs) + tone(40, fs), fs)


def best_imf_corr(decomp, target):
    """Highest |correlation| between any IMF and the target sequence."""
    best = 0.0
    for imf in decomp.imfs:
        if np.std(imf.samples) == 0:
            continue
        best = max(best, abs(np.corrcoef(imf.samples, target)[0, 1]))
    return best

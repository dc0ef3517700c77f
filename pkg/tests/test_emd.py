import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmgsep import (
    MonotoneComponentError,
    SiftConfig,
    TimeSeries,
    count_extrema_and_zero_crossings,
    envelopes,
    extract_imfs,
    local_mean,
)

from conftest import best_imf_corr, tone


def middle_half(x):
    n = len(x)
    return x[n // 4 : 3 * n // 4]


class TestEnvelopes:
    def test_pure_sine_envelopes_near_amplitude(self, fs):
        a = 2.0
        x = tone(10, fs, 2.0, amplitude=a)
        upper, lower = envelopes(x)
        assert np.all(np.abs(middle_half(upper) - a) < 0.05 * a)
        assert np.all(np.abs(middle_half(lower) + a) < 0.05 * a)

    def test_envelopes_pass_through_extrema(self, fs):
        rng = np.random.default_rng(0)
        x = rng.standard_normal(500)
        from mmgsep.core import find_extrema

        maxima, minima = find_extrema(x)
        upper, lower = envelopes(x)
        assert np.allclose(upper[maxima], x[maxima])
        assert np.allclose(lower[minima], x[minima])

    def test_constant_is_monotone(self):
        with pytest.raises(MonotoneComponentError):
            envelopes(np.ones(100))

    def test_ramp_is_monotone(self):
        with pytest.raises(MonotoneComponentError):
            envelopes(np.linspace(0, 1, 100))


class TestLocalMean:
    def test_tracks_slow_trend(self, fs):
        t = np.arange(10000) / fs
        trend = np.sin(2 * np.pi * 0.2 * t)
        x = tone(10, fs, 10.0) + 3 * trend
        m = local_mean(x)
        assert np.corrcoef(m, 3 * trend)[0, 1] > 0.95

    def test_pure_sine_mean_near_zero(self, fs):
        a = 1.5
        m = local_mean(tone(10, fs, 2.0, amplitude=a))
        assert np.all(np.abs(middle_half(m)) < 0.05 * a)

    def test_constant_error(self):
        with pytest.raises(MonotoneComponentError):
            local_mean(np.full(50, 2.0))


class TestExtractImfs:
    def test_two_tone_separation(self, fs, two_tone_signal):
        d = extract_imfs(two_tone_signal)
        t = np.arange(len(two_tone_signal)) / fs
        tone40 = tone(40, fs)
        tone2 = tone(2, fs)

        def dominant_hz(v):
            spec = np.abs(np.fft.rfft(v))
            spec[0] = 0
            return np.fft.rfftfreq(len(v), 1 / fs)[np.argmax(spec)]

        assert dominant_hz(d.imfs[0].samples) == pytest.approx(40, abs=1)
        assert abs(np.corrcoef(d.imfs[0].samples, tone40)[0, 1]) > 0.95
        assert best_imf_corr(d, tone2) > 0.95
        low = [i for i in d.imfs if dominant_hz(i.samples) < 5]
        assert any(abs(np.corrcoef(i.samples, tone2)[0, 1]) > 0.95 for i in low)

    def test_single_tone_one_significant_imf(self, fs):
        x = tone(10, fs, 5.0)
        d = extract_imfs(TimeSeries(x, fs))
        e_in = np.sum(x**2)
        assert np.sum(d.imfs[0].samples ** 2) >= 0.99 * e_in
        assert np.sum(d.residual**2) < 0.01 * e_in

    def test_constant_yields_no_imfs(self, fs):
        d = extract_imfs(TimeSeries(np.ones(1000), fs))
        assert d.imfs == ()
        assert np.array_equal(d.residual, np.ones(1000))

    def test_determinism(self, fs):
        rng = np.random.default_rng(4)
        x = TimeSeries(rng.standard_normal(3000), fs)
        a = extract_imfs(x)
        b = extract_imfs(x)
        assert len(a.imfs) == len(b.imfs)
        for ia, ib in zip(a.imfs, b.imfs):
            assert np.array_equal(ia.samples, ib.samples)
        assert np.array_equal(a.residual, b.residual)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SiftConfig(sd_threshold=0.0)
        with pytest.raises(ValueError):
            SiftConfig(max_imfs=0)


class TestCompleteness:
    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 10_000), n=st.integers(64, 2000))
    def test_reconstruction_identity(self, seed, n):
        rng = np.random.default_rng(seed)
        x = rng.standard_normal(n)
        d = extract_imfs(TimeSeries(x, 100.0))
        err = np.max(np.abs(x - d.reconstruct()))
        assert err <= 1e-8 * np.max(np.abs(x))


class TestImfInvariants:
    def test_extrema_crossing_mismatch(self, fs):
        rng = np.random.default_rng(21)
        for _ in range(5):
            x = rng.standard_normal(2000)
            d = extract_imfs(TimeSeries(x, fs))
            for imf in d.imfs:
                extrema, crossings = count_extrema_and_zero_crossings(imf.samples)
                if extrema >= 2:
                    assert abs(extrema - crossings) <= 1

    def test_dominant_frequency_non_increasing_on_tones(self, fs):
        x = TimeSeries(tone(2, fs) + tone(15, fs) + tone(80, fs), fs)
        d = extract_imfs(x)

        def dominant_hz(v):
            spec = np.abs(np.fft.rfft(v))
            spec[0] = 0
            return np.fft.rfftfreq(len(v), 1 / fs)[np.argmax(spec)]

        freqs = [dominant_hz(i.samples) for i in d.imfs if np.sum(i.samples**2) > 1e-6]
        assert all(a >= b for a, b in zip(freqs, freqs[1:]))

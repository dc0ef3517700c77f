import numpy as np
import pytest

from mmgsep import TimeSeries, design_butterworth_bandpass, filtfilt, separate_bandpass
from mmgsep.bandpass import FilterDesignError
from mmgsep.core import SizingError

from conftest import tone


def db(x):
    return 20 * np.log10(x)


@pytest.fixture(scope="module")
def ref_filter():
    return design_butterworth_bandpass(5, 100, 4, 1000.0)


class TestDesign:
    def test_unity_gain_at_geometric_center(self, ref_filter):
        center = np.sqrt(5 * 100)
        mag = ref_filter.magnitude(center)[0]
        assert abs(db(mag)) <= 0.1

    def test_minus_3db_at_edges(self, ref_filter):
        for edge in (5.0, 100.0):
            mag = ref_filter.magnitude(edge)[0]
            assert db(mag) == pytest.approx(-3.0, abs=0.5)

    def test_exact_null_at_dc(self, ref_filter):
        assert ref_filter.magnitude(0.0)[0] == pytest.approx(0.0, abs=1e-12)

    def test_stability(self, ref_filter):
        assert np.all(np.abs(ref_filter.poles()) < 1 - 1e-8)

    def test_all_legal_orders_stable(self):
        for order in (2, 4, 6, 8):
            f = design_butterworth_bandpass(5, 100, order, 1000.0)
            assert np.all(np.abs(f.poles()) < 1 - 1e-8)

    def test_invalid_inputs(self):
        with pytest.raises(FilterDesignError):
            design_butterworth_bandpass(5, 100, 3, 1000.0)
        with pytest.raises(FilterDesignError):
            design_butterworth_bandpass(100, 5, 4, 1000.0)
        with pytest.raises(FilterDesignError):
            design_butterworth_bandpass(5, 600, 4, 1000.0)


class TestFiltfilt:
    def test_in_band_tone_two_pass_amplitude(self, ref_filter):
        fs = 1000.0
        x = TimeSeries(tone(20, fs, 5.0), fs)
        y = filtfilt(ref_filter, x)
        expected = ref_filter.magnitude(20.0)[0] ** 2
        mid = slice(len(x) // 4, 3 * len(x) // 4)
        measured = np.sqrt(2 * np.mean(y.samples[mid] ** 2))
        assert measured == pytest.approx(expected, rel=0.05)

    def test_zero_phase_lag(self, ref_filter):
        fs = 1000.0
        x = tone(20, fs, 5.0)
        y = filtfilt(ref_filter, TimeSeries(x, fs)).samples
        lags = np.arange(-25, 26)
        xc = [np.dot(x[25:-25], np.roll(y, -lag)[25:-25]) for lag in lags]
        assert lags[np.argmax(xc)] == 0

    def test_dc_offset_removed(self, ref_filter):
        fs = 1000.0
        offset = 7.0
        y = filtfilt(ref_filter, TimeSeries(np.full(3000, offset), fs)).samples
        assert np.max(np.abs(y[100:-100])) < 1e-6 * offset

    def test_zero_in_zero_out(self, ref_filter):
        y = filtfilt(ref_filter, TimeSeries(np.zeros(2000), 1000.0))
        assert np.all(y.samples == 0)

    def test_too_short_signal(self, ref_filter):
        with pytest.raises(SizingError):
            filtfilt(ref_filter, TimeSeries(np.ones(30), 1000.0))

    def test_fs_mismatch(self, ref_filter):
        with pytest.raises(ValueError):
            filtfilt(ref_filter, TimeSeries(np.zeros(2000), 500.0))


class TestSeparateBandpass:
    def test_low_tone_goes_to_motion(self):
        from mmgsep import r_squared

        fs = 1000.0
        raw = TimeSeries(tone(2, fs, 5.0), fs)
        sep = separate_bandpass(raw)
        assert r_squared(sep.motion, raw) > 0.99
        assert sep.mmg.rms() < 0.1 * raw.rms()

    def test_band_center_tone_stays_in_mmg(self):
        fs = 1000.0
        raw = TimeSeries(tone(30, fs, 5.0), fs)
        sep = separate_bandpass(raw)
        mid = slice(len(raw) // 4, 3 * len(raw) // 4)
        ratio = np.sqrt(
            np.mean(sep.mmg.samples[mid] ** 2) / np.mean(raw.samples[mid] ** 2)
        )
        assert ratio > 0.99
        assert np.sqrt(np.mean(sep.motion.samples[mid] ** 2)) < 0.02 * raw.rms()

    def test_zero_signal(self):
        sep = separate_bandpass(TimeSeries(np.zeros(2000), 1000.0))
        assert np.all(sep.mmg.samples == 0)
        assert np.all(sep.motion.samples == 0)

    def test_exact_split(self):
        fs = 1000.0
        rng = np.random.default_rng(0)
        raw = TimeSeries(rng.standard_normal(3000), fs)
        sep = separate_bandpass(raw)
        err = np.max(np.abs(raw.samples - (sep.mmg.samples + sep.motion.samples)))
        assert err <= 1e-8 * np.max(np.abs(raw.samples))

    def test_known_limitation_10hz_leaks_into_mmg(self):
        # artifacts between 5 and 15 Hz pass the reference filter
        fs = 1000.0
        raw = TimeSeries(tone(10, fs, 5.0), fs)
        sep = separate_bandpass(raw)
        mid = slice(len(raw) // 4, 3 * len(raw) // 4)
        ratio = np.sqrt(
            np.mean(sep.mmg.samples[mid] ** 2) / np.mean(raw.samples[mid] ** 2)
        )
        assert ratio > 0.90

    def test_low_fs_rejected(self):
        with pytest.raises(ValueError):
            separate_bandpass(TimeSeries(np.zeros(2000), 200.0))

    def test_single_pass_flag(self):
        fs = 1000.0
        raw = TimeSeries(tone(20, fs, 5.0), fs)
        two_pass = separate_bandpass(raw)
        one_pass = separate_bandpass(raw, single_pass=True)
        assert not np.array_equal(two_pass.mmg.samples, one_pass.mmg.samples)
        err = np.max(
            np.abs(raw.samples - (one_pass.mmg.samples + one_pass.motion.samples))
        )
        assert err <= 1e-8 * np.max(np.abs(raw.samples))

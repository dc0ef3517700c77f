import numpy as np
import pytest
from sklearn.base import clone

from mmgsep import CeemdanDecomposer, EmdDecomposer, MmgSeparator

from conftest import tone


@pytest.fixture(scope="module")
def signal(fs=1000.0):
    return tone(3, fs, 3.0) + tone(35, fs, 3.0)


class TestEmdDecomposer:
    def test_transform_shape_and_sum(self, signal):
        est = EmdDecomposer()
        out = est.fit_transform(signal)
        assert out.ndim == 2
        assert out.shape[1] == len(signal)
        assert np.max(np.abs(out.sum(axis=0) - signal)) <= 1e-8 * np.max(np.abs(signal))

    def test_get_params_roundtrip(self):
        est = EmdDecomposer(max_imfs=6)
        params = est.get_params()
        assert params["max_imfs"] == 6
        est2 = EmdDecomposer().set_params(**params)
        assert est2.get_params() == params

    def test_clone(self):
        est = clone(EmdDecomposer(sd_threshold=0.1))
        assert est.sd_threshold == 0.1

    def test_rejects_2d_input(self):
        with pytest.raises(ValueError):
            EmdDecomposer().fit(np.zeros((4, 100)))

    def test_column_vector_accepted(self, signal):
        a = EmdDecomposer().fit_transform(signal)
        b = EmdDecomposer().fit_transform(signal.reshape(-1, 1))
        assert np.array_equal(a, b)


class TestCeemdanDecomposer:
    def test_deterministic_and_worker_invariant(self, signal):
        a = CeemdanDecomposer(ensemble_size=15, seed=3).fit_transform(signal)
        b = CeemdanDecomposer(ensemble_size=15, seed=3, workers=2).fit_transform(signal)
        assert np.array_equal(a, b)

    def test_seed_changes_output(self, signal):
        a = CeemdanDecomposer(ensemble_size=10, seed=0).fit_transform(signal)
        b = CeemdanDecomposer(ensemble_size=10, seed=1).fit_transform(signal)
        assert a.shape[1] == b.shape[1]
        assert not np.array_equal(a, b)

    def test_decomposition_attribute(self, signal):
        est = CeemdanDecomposer(ensemble_size=10, seed=0)
        out = est.fit_transform(signal)
        assert len(est.decomposition_.imfs) == out.shape[0] - 1

    def test_clone_drops_fitted_state(self, signal):
        est = CeemdanDecomposer(ensemble_size=10, seed=0)
        est.fit_transform(signal)
        assert not hasattr(clone(est), "decomposition_")


class TestMmgSeparator:
    def test_ceemdan_output_shape_and_split(self, signal):
        est = MmgSeparator(ensemble_size=15, seed=4)
        out = est.fit_transform(signal)
        assert out.shape == (2, len(signal))
        assert np.max(np.abs(out.sum(axis=0) - signal)) <= 1e-8 * np.max(np.abs(signal))
        assert est.selected_ is not None
        assert len(est.scores_) >= 1

    def test_bandpass_method(self, signal):
        est = MmgSeparator(method="bandpass")
        out = est.fit_transform(signal)
        assert out.shape == (2, len(signal))
        assert np.max(np.abs(out.sum(axis=0) - signal)) <= 1e-8 * np.max(np.abs(signal))
        assert est.separation_.method == "BANDPASS"

    def test_unknown_method_rejected(self, signal):
        with pytest.raises(ValueError, match="unknown method"):
            MmgSeparator(method="wavelet").fit(signal)

    def test_methods_differ(self, signal):
        a = MmgSeparator(ensemble_size=15, seed=4).fit_transform(signal)
        b = MmgSeparator(method="bandpass").fit_transform(signal)
        assert not np.array_equal(a, b)

    def test_params_surface_complete(self):
        params = MmgSeparator().get_params()
        for key in ("method", "ensemble_size", "theta", "fuzzen_m", "band_lo"):
            assert key in params

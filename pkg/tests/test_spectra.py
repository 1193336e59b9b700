import numpy as np
import pytest

from ssabank.core import correlation_matrix, eig_sym
from ssabank.exceptions import InvalidParameterError
from ssabank.filterbank import build_model
from ssabank.signalgen import gaussian_noise, tone
from ssabank.spectra import autocorr_psd, eigen_spectrum, local_maxima, welch_psd

from conftest import two_sines


def lobe_near(freqs, powers, f, width=0.02):
    sel = np.abs(freqs - f) < width
    return powers[sel].max()


class TestAutocorrPsd:
    def test_delta_is_flat(self):
        x = np.zeros(64)
        x[0] = 1.0
        est = autocorr_psd(x, 8, nfft=256)
        np.testing.assert_allclose(est.powers, 1.0, atol=1e-15)
        assert np.all(np.diff(est.frequencies) > 0)

    def test_constant_peaks_at_dc(self):
        est = autocorr_psd(np.full(10, 3.0), 2, nfft=64)
        # r = [90, 81] -> S(0) = 90 + 2 * 81
        assert est.powers[0] == pytest.approx(252.0)
        assert est.powers.max() == est.powers[0]

    def test_matches_direct_dtft(self, rng):
        x = rng.standard_normal(80)
        est = autocorr_psd(x, 6, nfft=128)
        lags = np.arange(-5, 6)
        r = np.array([np.sum(x[: 80 - abs(m)] * x[abs(m) :]) for m in lags])
        w = 2 * np.pi * est.frequencies
        ref = np.array([np.sum(r * np.exp(-1j * wk * lags)) for wk in w])
        np.testing.assert_allclose(est.powers, ref.real, atol=1e-10)

    def test_two_sinusoid_lobes(self, two_sine_signal):
        est = autocorr_psd(two_sine_signal, 30)
        top = est.frequencies[local_maxima(est.powers)[:2]]
        assert sorted(top) == pytest.approx([0.1, 0.4], abs=1 / 59)

    def test_bounds_toeplitz_eigenvalues(self, rng):
        for M in (10, 30):
            x = rng.standard_normal(500)
            S = autocorr_psd(x, M).powers
            lam = eig_sym(correlation_matrix(x, M, "toeplitz")).eigenvalues
            eps = 1e-6 * np.abs(S).max()
            assert lam.max() <= S.max() + eps and lam.min() >= S.min() - eps


class TestEigenSpectrum:
    def test_white_noise_roughly_flat(self):
        for seed in range(5):
            est = eigen_spectrum(build_model(gaussian_noise(10_000, seed), 20))
            assert est.powers.max() / est.powers.min() < 10

    def test_powers_are_model_eigenvalues(self, two_sine_signal):
        model = build_model(two_sine_signal, 30)
        est = eigen_spectrum(model)
        assert np.all(np.diff(est.frequencies) >= 0)
        assert sorted(est.powers) == sorted(model.eigenvalues)

    def test_two_sinusoid_significant_eigenvalues(self, two_sine_signal):
        est = eigen_spectrum(build_model(two_sine_signal, 30))
        floor = np.median(est.powers)
        big = est.frequencies[est.powers >= 10 * floor]
        assert len(big) == 4
        assert np.sum(np.abs(big - 0.1) < 1 / 59) == 2
        assert np.sum(np.abs(big - 0.4) < 1 / 59) == 2

    def test_single_tone_rank_two_structure(self):
        a, N, M, f = 1.5, 2000, 30, 0.1
        model = build_model(tone(N, a, f), M)
        lam = model.eigenvalues
        # rank-2 approximation: R ~ (a^2 N / 2) cos(2 pi f (i - j)) has eigenvalues N a^2 M / 4
        assert lam[0] + lam[1] == pytest.approx(N * a**2 * M / 2, rel=0.02)
        assert lam[0] == pytest.approx(lam[1], rel=1e-2)
        assert lam[2] < 0.01 * lam[0]
        assert np.all(np.abs(model.peak_frequencies[:2] - f) < 1 / (2 * M - 1))


class TestWelch:
    def test_white_noise_flat(self):
        for seed in range(5):
            est = welch_psd(gaussian_noise(2**16, seed), 256, 0.5)
            mean = est.powers.mean()
            assert np.all(np.abs(est.powers - mean) <= 0.25 * mean)
            # one-sided density integrates to the variance
            assert np.trapezoid(est.powers, est.frequencies) == pytest.approx(1.0, rel=0.05)

    def test_tone_detection(self):
        x = tone(4096, 1.0, 0.1)
        est = welch_psd(x, 256, 0.5)
        assert est.peak() == est.frequencies[np.argmin(np.abs(est.frequencies - 0.1))]

    def test_two_sinusoid_power_ratio(self):
        ratios = []
        for seed in range(5):
            est = welch_psd(two_sines(seed, n=8192), 256, 0.5)
            ratios.append(lobe_near(est.frequencies, est.powers, 0.4) / lobe_near(est.frequencies, est.powers, 0.1))
        # amplitudes 4 and 2 -> power ratio 16 / 4
        assert np.mean(ratios) == pytest.approx(4.0, rel=0.05)

    def test_sample_rate_units(self):
        est = welch_psd(tone(8000, 1.0, 50.0, 1000.0), 400, 0.5, sample_rate=1000.0)
        assert est.frequencies[-1] == 500.0
        assert est.peak() == pytest.approx(50.0, abs=2.5)

    @pytest.mark.parametrize("kwargs", [{"seg_len": 200}, {"seg_len": 50, "overlap": 1.0}])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidParameterError):
            welch_psd(np.ones(100), **kwargs)


def test_estimators_agree_on_single_tone():
    M = 32
    x = tone(1024, 1.0, 0.125)
    peaks = [
        autocorr_psd(x, M).peak(),
        eigen_spectrum(build_model(x, M)).peak(),
        welch_psd(x, 256, 0.5, nfft=4096).peak(),
    ]
    assert max(peaks) - min(peaks) <= 1 / (2 * M - 1)


def test_local_maxima():
    np.testing.assert_array_equal(local_maxima([0, 3, 1, 5, 5, 2, 4]), [3, 6, 1])
    assert local_maxima([]).size == 0

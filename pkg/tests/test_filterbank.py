import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ssabank.core import TimeSeries, correlation_matrix, eig_sym, ssa_reconstruct
from ssabank.exceptions import InvalidDimensionError, InvalidParameterError
from ssabank.filterbank import (
    ComponentFilter,
    build_model,
    extract_components,
    filter_coefficients,
    frequency_response,
    noise_floor_weights,
    peak_frequency,
    top_weights,
)

from conftest import two_sines

S = 1 / np.sqrt(2)


def fft_response(t, nfft):
    # place t_k circularly (t_0 at index 0, t_-k at nfft-k) and transform
    M = (len(t) + 1) // 2
    buf = np.zeros(nfft)
    buf[:M] = t[M - 1 :]
    buf[nfft - (M - 1) :] = t[: M - 1]
    return np.fft.fft(buf)[: nfft // 2 + 1]


def direct_filter(x, t):
    # xhat[n] = sum_{k=0}^{M-1} t_k x[n-k] + sum_{k=1}^{M-1} t_k x[n+k], zero outside
    M = (len(t) + 1) // 2
    N = len(x)
    tk = lambda k: t[k + M - 1]
    out = np.zeros(N)
    for n in range(N):
        acc = 0.0
        for k in range(M):
            if 0 <= n - k < N:
                acc += tk(k) * x[n - k]
        for k in range(1, M):
            if 0 <= n + k < N:
                acc += tk(k) * x[n + k]
        out[n] = acc
    return out


class TestFilterCoefficients:
    def test_lowpass_pair(self):
        np.testing.assert_allclose(filter_coefficients([S, S]).coefficients, [0.25, 0.5, 0.25], atol=1e-16)

    def test_highpass_pair(self):
        np.testing.assert_allclose(filter_coefficients([S, -S]).coefficients, [-0.25, 0.5, -0.25], atol=1e-16)

    def test_full_basis_sums_to_impulse(self):
        total = filter_coefficients([S, S]).coefficients + filter_coefficients([S, -S]).coefficients
        np.testing.assert_allclose(total, [0, 1, 0], atol=1e-15)

    @settings(max_examples=60, deadline=None)
    @given(arrays(np.float64, st.integers(1, 25), elements=st.floats(-10, 10)))
    def test_symmetric_and_dc_gain(self, u):
        t = filter_coefficients(u)
        c = t.coefficients
        assert np.array_equal(c, c[::-1])
        M = len(u)
        assert c.sum() == pytest.approx(u.sum() ** 2 / M, rel=1e-9, abs=1e-9)
        # oracle: explicit diagonal sums of u u^T
        T = np.outer(u, u)
        for k in range(M):
            assert c[M - 1 + k] == pytest.approx(np.trace(T, offset=k) / M, rel=1e-12, abs=1e-12)

    def test_wrong_length(self):
        with pytest.raises(InvalidDimensionError):
            filter_coefficients(np.ones(3), M=4)


class TestFrequencyResponse:
    def test_dc_and_nyquist(self):
        resp = frequency_response(ComponentFilter([0.25, 0.5, 0.25]), nfft=8)
        assert resp.values[0] == pytest.approx(1.0)
        assert resp.values[-1] == pytest.approx(0.0, abs=1e-16)
        np.testing.assert_allclose(resp.frequencies, [0, 0.125, 0.25, 0.375, 0.5])

    def test_matches_fft_oracle(self, rng):
        _, U = eig_sym(correlation_matrix(rng.standard_normal(500), 17))
        t = filter_coefficients(U[:, 3])
        resp = frequency_response(t, 4096)
        ref = fft_response(t.coefficients, 4096)
        assert np.abs(ref.imag).max() < 1e-12
        np.testing.assert_allclose(resp.values, ref.real, atol=1e-10)

    def test_grid_independent_evaluation(self, rng):
        t = filter_coefficients(rng.standard_normal(9))
        resp = frequency_response(t, 64, sample_rate=8.0)
        np.testing.assert_allclose(t.response_at(resp.frequencies, 8.0), resp.values, atol=1e-13)

    def test_nfft_too_small(self):
        with pytest.raises(InvalidParameterError):
            frequency_response(filter_coefficients(np.ones(5) / np.sqrt(5)), nfft=8)


class TestPeakFrequency:
    def test_lowpass(self):
        assert peak_frequency(frequency_response(ComponentFilter([0.25, 0.5, 0.25]), 64)) == 0.0

    def test_highpass(self):
        resp = frequency_response(ComponentFilter([-0.25, 0.5, -0.25]), 64, sample_rate=10.0)
        assert peak_frequency(resp) == 5.0

    def test_two_sinusoid_pairs_bracket_tones(self):
        # noiseless oracle: a sinusoid's eigen-pair is the centro-symmetric / anti-symmetric
        # windowed cosine and sine, whose |H|^2 peaks sit just either side of the tone
        M, nfft = 30, 4096
        n = np.arange(M) - (M - 1) / 2
        expected = []
        for f in (0.1, 0.4):
            for u in (np.cos(2 * np.pi * f * n), np.sin(2 * np.pi * f * n)):
                expected.append(np.argmax(np.abs(np.fft.rfft(u, nfft)) ** 2) / nfft)
        for seed in range(5):
            peaks = build_model(two_sines(seed), M).peak_frequencies[:4]
            assert sorted(peaks) == pytest.approx(sorted(expected), abs=2 / nfft)
            assert np.sum(np.abs(peaks - 0.1) < 1 / (2 * M - 1)) == 2
            assert np.sum(np.abs(peaks - 0.4) < 1 / (2 * M - 1)) == 2


class TestBuildModel:
    def test_dc_signal_first_peak_component(self):
        model = build_model(np.full(200, 2.0), 4, ordering="peak")
        assert model.peak_frequencies[0] == 0.0
        assert model.eigenvalues[0] == model.eigenvalues.max()

    def test_eigenvalue_ordering(self, two_sine_signal):
        model = build_model(two_sine_signal, 12)
        assert np.all(np.diff(model.eigenvalues) <= 0)

    @pytest.mark.parametrize("M", [2, 5, 10, 30])
    def test_impulse_completeness(self, rng, M):
        model = build_model(rng.standard_normal(300), M)
        delta = np.zeros(2 * M - 1)
        delta[M - 1] = 1.0
        assert np.abs(model.coefficients.sum(axis=0) - delta).max() <= 1e-12

    def test_response_completeness_and_symmetry(self, rng):
        model = build_model(rng.standard_normal(400), 16, mode="embedding")
        np.testing.assert_allclose(model.responses.sum(axis=0), 1.0, atol=1e-10)
        assert np.array_equal(model.coefficients, model.coefficients[:, ::-1])

    def test_unit_energy_analysis_filters(self, rng):
        model = build_model(rng.standard_normal(400), 20)
        H = np.fft.fft(model.eigenvectors.T, 4096, axis=1)
        np.testing.assert_allclose(np.mean(np.abs(H) ** 2, axis=1), 1.0, atol=1e-10)
        # T_m = |H_m|^2 / M is non-negative
        assert model.responses.min() > -1e-12

    def test_peak_ordering_permutes_jointly(self, two_sine_signal):
        a = build_model(two_sine_signal, 20)
        b = build_model(two_sine_signal, 20, ordering="peak")
        assert np.all(np.diff(b.peak_frequencies) >= 0)
        assert sorted(a.eigenvalues) == sorted(b.eigenvalues)
        for m in range(20):
            j = int(np.flatnonzero(a.eigen_rank == b.eigen_rank[m])[0])
            assert b.eigenvalues[m] == a.eigenvalues[j]
            assert np.array_equal(b.eigenvectors[:, m], a.eigenvectors[:, j])
            assert np.array_equal(b.coefficients[m], a.coefficients[j])
            assert b.peak_frequencies[m] == a.peak_frequencies[j]
        # ties keep the larger eigenvalue first
        for m in range(19):
            if b.peak_frequencies[m] == b.peak_frequencies[m + 1]:
                assert b.eigenvalues[m] >= b.eigenvalues[m + 1]
        back = b.reorder("eigenvalue")
        assert np.array_equal(back.eigenvalues, a.eigenvalues)

    def test_sample_rate_scales_peaks(self, two_sine_signal):
        a = build_model(two_sine_signal, 10)
        b = build_model(TimeSeries(two_sine_signal.samples, 1000.0), 10)
        np.testing.assert_allclose(b.peak_frequencies, 1000.0 * a.peak_frequencies)
        assert b.peak_frequencies.max() <= 500.0

    def test_jacobi_model_matches(self, two_sine_signal):
        a = build_model(two_sine_signal, 10, method="lapack")
        b = build_model(two_sine_signal, 10, method="jacobi")
        np.testing.assert_allclose(a.eigenvalues, b.eigenvalues, rtol=1e-11)
        np.testing.assert_allclose(a.coefficients, b.coefficients, atol=1e-10)

    def test_invalid(self):
        with pytest.raises(InvalidDimensionError):
            build_model(np.ones(5), 6)
        with pytest.raises(InvalidParameterError):
            build_model(np.ones(50), 10, nfft=16)


class TestExtractComponents:
    @pytest.mark.parametrize("M", [3, 8, 16])
    def test_matches_matrix_path(self, rng, M):
        x = rng.standard_normal(150)
        model = build_model(x, M)
        comps = extract_components(x, model)
        scale = np.abs(x).max()
        for m in range(M):
            p = np.zeros(M)
            p[m] = 1.0
            oracle = ssa_reconstruct(x, model.basis, p, "filterbank")
            assert np.abs(comps.components[m] - oracle).max() <= 1e-10 * scale

    def test_matches_direct_convolution(self, rng):
        x = rng.standard_normal(60)
        model = build_model(x, 7, mode="embedding")
        comps = extract_components(x, model)
        for m in (0, 3, 6):
            np.testing.assert_allclose(comps.components[m], direct_filter(x, model.coefficients[m]), atol=1e-12)

    def test_interior_sum_is_input(self, two_sine_signal):
        x = two_sine_signal.samples
        comps = extract_components(x, build_model(x, 30))
        sl = comps.interior
        assert sl == slice(29, 1024 - 29)
        err = np.linalg.norm(comps.total()[sl] - x[sl]) / np.linalg.norm(x[sl])
        assert err <= 1e-10

    def test_weights_scale_components(self, two_sine_signal):
        model = build_model(two_sine_signal, 10)
        p = np.linspace(0, 1, 10)
        a = extract_components(two_sine_signal, model)
        b = extract_components(two_sine_signal, model, p)
        np.testing.assert_allclose(b.components, a.components * p[:, None], atol=1e-12)

    def test_in_phase_with_input(self):
        x = np.sin(2 * np.pi * 0.1 * np.arange(1024))
        model = build_model(x, 30)
        y = extract_components(x, model).components[0]
        xc = np.correlate(y, x, mode="full")
        assert np.argmax(xc) - (len(x) - 1) == 0

    def test_length_mismatch(self, two_sine_signal):
        model = build_model(two_sine_signal, 10)
        with pytest.raises(InvalidDimensionError):
            extract_components(two_sine_signal.samples[:-1], model)


class TestWeights:
    def test_top_weights_follow_eigenvalue_rank(self, two_sine_signal):
        model = build_model(two_sine_signal, 12, ordering="peak")
        p = top_weights(model, 4)
        assert p.sum() == 4
        chosen = np.sort(model.eigenvalues[p == 1])
        np.testing.assert_array_equal(chosen, np.sort(model.eigenvalues)[-4:])

    def test_noise_floor_weights_in_model_order(self, two_sine_signal):
        model = build_model(two_sine_signal, 12, ordering="peak")
        p = noise_floor_weights(model, 4)
        lam = np.sort(model.eigenvalues)[::-1]
        eta = lam[4:].mean()
        for m in np.flatnonzero(p):
            assert p[m] == pytest.approx(np.sqrt(1 - eta / model.eigenvalues[m]))
        assert np.count_nonzero(p) == 4

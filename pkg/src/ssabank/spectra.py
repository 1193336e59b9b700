"""Power-spectrum estimators: autocorrelation DFT, eigen-spectrum and Welch."""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import signal

from .core import as_samples, autocorrelation, sample_rate_of, _check_window
from .exceptions import InvalidParameterError
from .filterbank import DEFAULT_NFFT, Ordering, _check_nfft, _cosine_matrix

__all__ = [
    "Estimator",
    "SpectrumEstimate",
    "autocorr_psd",
    "eigen_spectrum",
    "welch_psd",
    "local_maxima",
]


class Estimator(str, Enum):
    AUTOCORR_DFT = "autocorr"
    EIGEN_SPECTRUM = "eigen"
    WELCH = "welch"


@dataclass(frozen=True)
class SpectrumEstimate:
    """Power values at ascending frequencies in ``[0, sample_rate/2]``."""

    frequencies: np.ndarray
    powers: np.ndarray
    estimator: Estimator
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("frequencies", "powers"):
            arr = np.array(getattr(self, name), dtype=np.float64)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "estimator", Estimator(self.estimator))

    def peak(self):
        """Frequency of the global maximum (lowest frequency on ties)."""
        return float(self.frequencies[np.argmax(self.powers)])

    def to_decibels(self, floor=1e-300):
        return 10.0 * np.log10(np.maximum(self.powers, floor))


def autocorr_psd(x, M, nfft=DEFAULT_NFFT, sample_rate=None):
    """DFT of the raw autocorrelation over lags ``-(M-1) .. M-1``.

    ``S(w) = r[0] + 2 sum_{m=1}^{M-1} r[m] cos(m w)`` on the grid
    ``w_j = 2 pi j / nfft``, ``j = 0 .. nfft/2``. Values may dip slightly
    below zero through truncation of the lag window; they are not clipped.
    """
    fs = float(sample_rate) if sample_rate is not None else sample_rate_of(x)
    samples = as_samples(x)
    M = _check_window(M, samples.shape[0])
    nfft = _check_nfft(nfft, M)
    r = autocorrelation(samples, M - 1)
    S = r[0] + 2.0 * (r[1:] @ _cosine_matrix(M, nfft))
    freqs = np.arange(nfft // 2 + 1) * (fs / nfft)
    return SpectrumEstimate(freqs, S, Estimator.AUTOCORR_DFT, {"M": M, "nfft": nfft})


def eigen_spectrum(model):
    """Eigenvalues placed at the peak frequency of their filter.

    The model is reordered by peak frequency first if necessary, so the
    returned frequencies are non-decreasing and the powers are exactly the
    model eigenvalues.
    """
    if model.ordering is not Ordering.PEAK:
        model = model.reorder(Ordering.PEAK)
    return SpectrumEstimate(
        model.peak_frequencies,
        model.eigenvalues,
        Estimator.EIGEN_SPECTRUM,
        {"M": model.M, "nfft": model.nfft, "mode": model.mode.value},
    )


def welch_psd(x, seg_len, overlap=0.5, nfft=None, window="hamming", sample_rate=None):
    """Welch average of windowed periodograms (density scaling).

    The one-sided density is twice the two-sided one at every bin, DC and
    Nyquist included, so white noise gives a flat estimate whose integral
    over ``[0, fs/2]`` (trapezoidal rule) is the signal variance.

    Parameters
    ----------
    seg_len : int
        Segment length in samples.
    overlap : float
        Fraction of ``seg_len`` shared by consecutive segments, in ``[0, 1)``.
    nfft : int, optional
        Transform length (defaults to ``seg_len``).
    window : str or tuple
        Any window accepted by :func:`scipy.signal.get_window`.
    """
    fs = float(sample_rate) if sample_rate is not None else sample_rate_of(x)
    samples = as_samples(x)
    N = samples.shape[0]
    if isinstance(seg_len, bool) or int(seg_len) != seg_len or not 1 <= seg_len <= N:
        raise InvalidParameterError(f"seg_len must be in [1, {N}], got {seg_len!r}")
    seg_len = int(seg_len)
    if not 0.0 <= overlap < 1.0:
        raise InvalidParameterError(f"overlap must lie in [0, 1), got {overlap}")
    if nfft is None:
        nfft = seg_len
    if int(nfft) < seg_len:
        raise InvalidParameterError(f"nfft={nfft} is shorter than seg_len={seg_len}")
    nfft = int(nfft)
    noverlap = int(np.floor(overlap * seg_len))
    _, P = signal.welch(
        samples,
        fs=fs,
        window=window,
        nperseg=seg_len,
        noverlap=noverlap,
        nfft=nfft,
        detrend=False,
        return_onesided=False,
        scaling="density",
    )
    half = nfft // 2 + 1
    freqs = np.arange(half) * (fs / nfft)
    meta = {"seg_len": seg_len, "overlap": overlap, "nfft": nfft, "window": str(window)}
    return SpectrumEstimate(freqs, 2.0 * P[:half], Estimator.WELCH, meta)


def local_maxima(powers):
    """Indices of local maxima of a sequence, sorted by decreasing value.

    An element is a local maximum if it exceeds its left neighbour and is
    not exceeded by its right one (the first sample of a plateau); the end
    points only compare against their single neighbour.
    """
    p = np.asarray(powers, dtype=np.float64)
    if p.size == 0:
        return np.array([], dtype=np.intp)
    left = np.concatenate([[-np.inf], p[:-1]])
    right = np.concatenate([p[1:], [-np.inf]])
    idx = np.flatnonzero((p > left) & (p >= right))
    return idx[np.argsort(-p[idx], kind="stable")]

"""SSA as a bank of zero-phase FIR filters.

Each eigenvector ``u_m`` of the correlation matrix defines a causal
analysis filter ``H_m(z) = sum_k u_km z^-k`` and an anti-causal synthesis
filter ``F_m(z) = (1/M) sum_k u_km z^k``. Their cascade ``T_m = H_m F_m``
has the symmetric impulse response

    t_k = (1/M) sum_i u_i u_{i+|k|},    k = -(M-1) .. M-1,

i.e. the autocorrelation of the eigenvector divided by ``M``. Its frequency
response ``T_m(w) = t_0 + 2 sum_k t_k cos(k w) = |H_m(w)|^2 / M`` is real
and non-negative, so every component is in phase with the input, and the
responses of a complete basis add up to one.
"""

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .core import (
    CorrelationMode,
    EigenBasis,
    as_samples,
    correlation_matrix,
    eig_sym,
    noise_weights,
    sample_rate_of,
)
from .exceptions import InvalidDimensionError, InvalidParameterError

__all__ = [
    "Ordering",
    "ComponentFilter",
    "FrequencyResponse",
    "SsaModel",
    "ComponentSet",
    "DEFAULT_NFFT",
    "filter_coefficients",
    "frequency_response",
    "peak_frequency",
    "build_model",
    "extract_components",
    "top_weights",
    "noise_floor_weights",
]

DEFAULT_NFFT = 4096


class Ordering(str, Enum):
    """Order of the components inside a model."""

    EIGENVALUE = "eigenvalue"  # descending eigenvalue (scree order)
    PEAK = "peak"  # ascending peak frequency of the filter response


def _readonly(arr):
    arr = np.array(arr, dtype=np.float64)
    arr.flags.writeable = False
    return arr


def _cosine_matrix(M, nfft):
    k = np.arange(1, M)
    w = 2.0 * np.pi * np.arange(nfft // 2 + 1) / nfft
    return np.cos(np.outer(k, w))


def _check_nfft(nfft, M):
    if isinstance(nfft, bool) or int(nfft) != nfft:
        raise InvalidParameterError(f"nfft must be an integer, got {nfft!r}")
    nfft = int(nfft)
    if nfft < max(2, 2 * (M - 1) + 1):
        raise InvalidParameterError(
            f"nfft={nfft} is too small for {2 * M - 1} filter coefficients"
        )
    return nfft


@dataclass(frozen=True)
class ComponentFilter:
    """Symmetric impulse response ``t_k`` for ``k = -(M-1) .. M-1``."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = _readonly(self.coefficients)
        if c.ndim != 1 or c.size % 2 != 1:
            raise InvalidDimensionError("filter needs an odd number (2M-1) of coefficients")
        object.__setattr__(self, "coefficients", c)

    @property
    def M(self):
        return (self.coefficients.size + 1) // 2

    @property
    def lags(self):
        return np.arange(-(self.M - 1), self.M)

    @property
    def one_sided(self):
        """Coefficients ``t_0 .. t_{M-1}``."""
        return self.coefficients[self.M - 1 :]

    def response_at(self, freqs, sample_rate=1.0):
        """Evaluate ``T(w) = t_0 + 2 sum_k t_k cos(k w)`` at arbitrary frequencies."""
        w = 2.0 * np.pi * np.asarray(freqs, dtype=np.float64) / sample_rate
        t = self.one_sided
        k = np.arange(1, self.M)
        return t[0] + 2.0 * np.cos(np.multiply.outer(w, k)) @ t[1:]


@dataclass(frozen=True)
class FrequencyResponse:
    """Real (zero-phase) response sampled on ``[0, sample_rate/2]``."""

    frequencies: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "frequencies", _readonly(self.frequencies))
        object.__setattr__(self, "values", _readonly(self.values))
        if self.frequencies.shape != self.values.shape or self.values.size == 0:
            raise InvalidDimensionError("frequencies and values must be non-empty and aligned")


def filter_coefficients(u, M=None):
    """Cascaded analysis/synthesis impulse response of one eigenvector.

    Parameters
    ----------
    u : (M,) array_like
        Eigenvector (filter taps).
    M : int, optional
        Window length; defaults to ``len(u)``.

    Examples
    --------
    >>> filter_coefficients(np.array([1.0, 1.0]) / np.sqrt(2)).coefficients
    array([0.25, 0.5 , 0.25])
    """
    u = np.asarray(u, dtype=np.float64)
    if M is None:
        M = u.shape[0]
    if u.ndim != 1 or u.shape[0] != M:
        raise InvalidDimensionError(f"eigenvector of shape {u.shape} does not have M={M} entries")
    half = np.array([u[: M - k] @ u[k:] for k in range(M)]) / M
    # mirror the non-negative lags so that t_k == t_-k holds bit for bit
    return ComponentFilter(np.concatenate([half[:0:-1], half]))


def _filter_bank(U):
    U = np.asarray(U, dtype=np.float64)
    M = U.shape[0]
    half = np.empty((U.shape[1], M))
    for k in range(M):
        half[:, k] = np.einsum("im,im->m", U[: M - k], U[k:])
    half /= M
    return np.concatenate([half[:, :0:-1], half], axis=1)


def frequency_response(t, nfft=DEFAULT_NFFT, sample_rate=1.0):
    """Sample the real response of ``t`` on ``nfft // 2 + 1`` points of ``[0, fs/2]``.

    The grid is ``w_j = 2 pi j / nfft``; ``nfft`` must be at least ``2M - 1``
    so that the coefficient sequence is not aliased.
    """
    if not isinstance(t, ComponentFilter):
        t = ComponentFilter(t)
    nfft = _check_nfft(nfft, t.M)
    c = t.one_sided
    values = c[0] + 2.0 * (c[1:] @ _cosine_matrix(t.M, nfft))
    freqs = np.arange(nfft // 2 + 1) * (sample_rate / nfft)
    return FrequencyResponse(freqs, values)


def peak_frequency(resp):
    """Frequency at which ``|values|`` is largest (lowest frequency on ties)."""
    return float(resp.frequencies[np.argmax(np.abs(resp.values))])


@dataclass(frozen=True)
class SsaModel:
    """Eigenvalues, eigenvectors, filters and filter peaks of one SSA decomposition.

    All per-component arrays share the same first axis, in ``ordering``.
    ``eigenvectors`` holds ``u_m`` as columns; ``coefficients[m]`` the
    ``2M - 1`` taps of filter ``m``; ``responses[m]`` its response on
    ``frequencies``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    coefficients: np.ndarray
    responses: np.ndarray
    frequencies: np.ndarray
    peak_frequencies: np.ndarray
    ordering: Ordering
    N: int
    sample_rate: float = 1.0
    mode: CorrelationMode = CorrelationMode.TOEPLITZ
    nfft: int = DEFAULT_NFFT
    eigen_rank: np.ndarray = field(default=None)

    def __post_init__(self):
        for name in (
            "eigenvalues",
            "eigenvectors",
            "coefficients",
            "responses",
            "frequencies",
            "peak_frequencies",
        ):
            object.__setattr__(self, name, _readonly(getattr(self, name)))
        if self.eigen_rank is None:
            rank = np.argsort(np.argsort(-self.eigenvalues, kind="stable"), kind="stable")
        else:
            rank = np.asarray(self.eigen_rank, dtype=np.intp)
        rank = rank.copy()
        rank.flags.writeable = False
        object.__setattr__(self, "eigen_rank", rank)
        object.__setattr__(self, "ordering", Ordering(self.ordering))
        object.__setattr__(self, "mode", CorrelationMode(self.mode))

    @property
    def M(self):
        return self.eigenvalues.shape[0]

    @property
    def basis(self):
        return EigenBasis(self.eigenvalues, self.eigenvectors)

    def filter(self, m):
        return ComponentFilter(self.coefficients[m])

    def response(self, m):
        return FrequencyResponse(self.frequencies, self.responses[m])

    def reorder(self, ordering):
        """Return the model with its components permuted into ``ordering``.

        Peak ordering sorts by ascending peak frequency; components sharing a
        peak keep descending-eigenvalue order.
        """
        ordering = Ordering(ordering)
        if ordering is Ordering.PEAK:
            perm = np.lexsort((self.eigen_rank, self.peak_frequencies))
        else:
            perm = np.argsort(self.eigen_rank, kind="stable")
        return replace(
            self,
            eigenvalues=self.eigenvalues[perm],
            eigenvectors=self.eigenvectors[:, perm],
            coefficients=self.coefficients[perm],
            responses=self.responses[perm],
            peak_frequencies=self.peak_frequencies[perm],
            eigen_rank=self.eigen_rank[perm],
            ordering=ordering,
        )


def build_model(
    x,
    M,
    mode=CorrelationMode.TOEPLITZ,
    ordering=Ordering.EIGENVALUE,
    nfft=DEFAULT_NFFT,
    sample_rate=None,
    method="lapack",
):
    """Decompose ``x`` into an SSA filter-bank model.

    Parameters
    ----------
    x : array_like or TimeSeries
        Input signal.
    M : int
        Window length / number of filter taps.
    mode : {"toeplitz", "embedding"}
        Correlation matrix estimator.
    ordering : {"eigenvalue", "peak"}
        Component order of the returned model.
    nfft : int
        Frequency grid size; peak frequencies are accurate to ``fs / nfft``.
    sample_rate : float, optional
        Overrides the sample rate of a :class:`TimeSeries` input (default 1).
    method : {"lapack", "jacobi"}
        Eigensolver, see :func:`ssabank.core.eig_sym`.

    Returns
    -------
    SsaModel
    """
    fs = float(sample_rate) if sample_rate is not None else sample_rate_of(x)
    samples = as_samples(x)
    R = correlation_matrix(samples, M, mode)
    M = R.shape[0]
    nfft = _check_nfft(nfft, M)
    basis = eig_sym(R, method=method)

    coefficients = _filter_bank(basis.eigenvectors)
    responses = coefficients[:, M - 1 : M] + 2.0 * (
        coefficients[:, M:] @ _cosine_matrix(M, nfft)
    )
    freqs = np.arange(nfft // 2 + 1) * (fs / nfft)
    peaks = freqs[np.argmax(np.abs(responses), axis=1)]

    model = SsaModel(
        eigenvalues=basis.eigenvalues,
        eigenvectors=basis.eigenvectors,
        coefficients=coefficients,
        responses=responses,
        frequencies=freqs,
        peak_frequencies=peaks,
        ordering=Ordering.EIGENVALUE,
        N=samples.shape[0],
        sample_rate=fs,
        mode=mode,
        nfft=nfft,
    )
    return model.reorder(ordering) if Ordering(ordering) is Ordering.PEAK else model


@dataclass(frozen=True)
class ComponentSet:
    """Filter-bank outputs ``xhat_m[n]`` (rows) and the weights applied."""

    components: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "components", _readonly(self.components))
        object.__setattr__(self, "weights", _readonly(self.weights))

    @property
    def M(self):
        return self.components.shape[0]

    @property
    def N(self):
        return self.components.shape[1]

    @property
    def interior(self):
        """Slice of samples ``M-1 .. N-M`` unaffected by the zero padding."""
        return slice(self.M - 1, self.N - self.M + 1)

    def total(self):
        return self.components.sum(axis=0)


def extract_components(x, model, weights=None):
    """Filter ``x`` through every branch of the bank.

    ``xhat_m[n] = p_m * sum_{k=-(M-1)}^{M-1} t_km x[n-k]`` with ``x`` taken as
    zero outside ``[0, N-1]``. The output has the same length as ``x``.

    Parameters
    ----------
    x : array_like or TimeSeries
    model : SsaModel
    weights : (M,) array_like, optional
        Per-component weights in the model's ordering; all ones by default.
    """
    x = as_samples(x)
    M = model.M
    if x.shape[0] != model.N:
        raise InvalidDimensionError(f"signal length {x.shape[0]} differs from model N={model.N}")
    p = np.ones(M) if weights is None else np.asarray(weights, dtype=np.float64)
    if p.shape != (M,):
        raise InvalidDimensionError(f"expected {M} weights, got shape {p.shape}")
    N = x.shape[0]
    comps = np.empty((M, N))
    for m in range(M):
        full = np.convolve(x, model.coefficients[m])
        comps[m] = p[m] * full[M - 1 : M - 1 + N]
    return ComponentSet(comps, p)


def top_weights(model, L):
    """Binary weights selecting the ``L`` largest-eigenvalue components."""
    if isinstance(L, bool) or int(L) != L or not 1 <= L <= model.M:
        raise InvalidDimensionError(f"L must satisfy 1 <= L <= {model.M}, got {L!r}")
    return (model.eigen_rank < L).astype(np.float64)


def noise_floor_weights(model, L):
    """Noise-floor weights (see :func:`ssabank.core.noise_weights`) in model order."""
    descending = np.sort(model.eigenvalues)[::-1]
    return noise_weights(descending, L)[model.eigen_rank]

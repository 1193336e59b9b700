"""Embedding, correlation matrices, eigenbasis and matrix-form reconstruction.

Conventions
-----------
``M`` is the window length (embedding dimension, number of filter taps) and
``K = N - M + 1`` the number of lagged vectors. Row ``i`` (0-based) of the
trajectory matrix holds ``x[M-1-i : N-i]``, so the first row carries the
most recent sample of each window and every descending diagonal is
constant::

    X = [[x[M-1], x[M],   ..., x[N-1]],
         [x[M-2], x[M-1], ..., x[N-2]],
         ...
         [x[0],   x[1],   ..., x[N-M]]]

Entry ``X[i, k]`` holds sample ``n = M - 1 - i + k``.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exceptions import (
    ConvergenceError,
    InvalidDimensionError,
    InvalidInputError,
    InvalidParameterError,
)
from .jacobi import jacobi_eigh

__all__ = [
    "TimeSeries",
    "CorrelationMode",
    "Averaging",
    "EigenBasis",
    "as_samples",
    "embed",
    "autocorrelation",
    "correlation_matrix",
    "eig_sym",
    "project",
    "noise_weights",
    "reconstruct_matrix",
    "diagonal_average",
    "ssa_reconstruct",
]


class CorrelationMode(str, Enum):
    """How the M x M correlation matrix is estimated."""

    EMBEDDING = "embedding"  # R = X X^T
    TOEPLITZ = "toeplitz"  # R[i, j] = r[|i - j|]


class Averaging(str, Enum):
    """Normalisation used when collapsing diagonals to samples."""

    MEAN = "mean"  # divide by the number of entries on the diagonal
    FILTERBANK = "filterbank"  # divide by M (zero padding outside the record)


def _frozen(arr):
    arr = np.array(arr, dtype=np.float64)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled real signal.

    Parameters
    ----------
    samples : array_like
        1-D finite samples.
    sample_rate : float
        Samples per second; 1.0 means frequencies are in cycles/sample.
    """

    samples: np.ndarray
    sample_rate: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "samples", _frozen(as_samples(self.samples)))
        fs = float(self.sample_rate)
        if not np.isfinite(fs) or fs <= 0:
            raise InvalidParameterError(f"sample_rate must be positive, got {fs}")
        object.__setattr__(self, "sample_rate", fs)

    def __len__(self):
        return self.samples.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.samples, dtype=dtype)


def as_samples(x):
    """Validate ``x`` (array_like or :class:`TimeSeries`) and return a float array."""
    if isinstance(x, TimeSeries):
        return x.samples
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidInputError(f"expected a 1-D signal, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise InvalidInputError("signal must contain at least one sample")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("signal contains non-finite samples")
    return arr


def sample_rate_of(x, default=1.0):
    return x.sample_rate if isinstance(x, TimeSeries) else float(default)


def _check_window(M, N):
    if isinstance(M, bool) or int(M) != M:
        raise InvalidDimensionError(f"M must be an integer, got {M!r}")
    M = int(M)
    if M < 1:
        raise InvalidDimensionError(f"M must be >= 1, got {M}")
    if M > N:
        raise InvalidDimensionError(f"M={M} exceeds the signal length N={N}")
    return M


def embed(x, M):
    """Build the M x (N-M+1) Toeplitz trajectory matrix of ``x``.

    Examples
    --------
    >>> embed([1, 2, 3, 4, 5], 2)
    array([[2., 3., 4., 5.],
           [1., 2., 3., 4.]])
    """
    x = as_samples(x)
    N = x.shape[0]
    M = _check_window(M, N)
    K = N - M + 1
    rows = (M - 1 - np.arange(M))[:, None] + np.arange(K)[None, :]
    return x[rows]


def autocorrelation(x, maxlag):
    """Raw (non-normalised) autocorrelation ``r[m] = sum_n x[n] x[n+m]``.

    Returns lags ``0..maxlag``; negative lags follow from ``r[-m] = r[m]``.
    """
    x = as_samples(x)
    N = x.shape[0]
    if isinstance(maxlag, bool) or int(maxlag) != maxlag or maxlag < 0:
        raise InvalidDimensionError(f"maxlag must be a non-negative integer, got {maxlag!r}")
    maxlag = int(maxlag)
    if maxlag >= N:
        raise InvalidDimensionError(f"maxlag={maxlag} must be smaller than N={N}")
    return np.array([x[: N - m] @ x[m:] for m in range(maxlag + 1)])


def toeplitz_from_lags(r):
    r = np.asarray(r, dtype=np.float64)
    idx = np.abs(np.subtract.outer(np.arange(r.size), np.arange(r.size)))
    return r[idx]


def correlation_matrix(x, M, mode=CorrelationMode.TOEPLITZ):
    """Non-normalised M x M correlation matrix of ``x``.

    ``mode="embedding"`` computes ``X @ X.T`` from the trajectory matrix;
    ``mode="toeplitz"`` fills every diagonal with the raw autocorrelation
    at that lag, which makes the matrix exactly Toeplitz.
    """
    mode = CorrelationMode(mode)
    x = as_samples(x)
    M = _check_window(M, x.shape[0])
    if mode is CorrelationMode.EMBEDDING:
        X = embed(x, M)
        R = X @ X.T
        return 0.5 * (R + R.T)
    return toeplitz_from_lags(autocorrelation(x, M - 1))


@dataclass(frozen=True)
class EigenBasis:
    """Eigenvalues (descending) and orthonormal eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", _frozen(self.eigenvalues))
        object.__setattr__(self, "eigenvectors", _frozen(self.eigenvectors))

    @property
    def M(self):
        return self.eigenvalues.shape[0]

    def __iter__(self):
        return iter((self.eigenvalues, self.eigenvectors))


def _fix_signs(U):
    # largest-magnitude entry of each column positive; entries within a few ulps
    # of the maximum count as ties and the earliest one wins
    mag = np.abs(U)
    pivots = np.argmax(mag >= mag.max(axis=0) * (1.0 - 1e-12), axis=0)
    signs = np.where(U[pivots, np.arange(U.shape[1])] < 0, -1.0, 1.0)
    return U * signs


def eig_sym(R, method="lapack"):
    """Symmetric eigendecomposition with a deterministic sign convention.

    Parameters
    ----------
    R : (M, M) array_like
        Symmetric matrix.
    method : {"lapack", "jacobi"}
        ``"lapack"`` uses :func:`numpy.linalg.eigh`; ``"jacobi"`` uses the
        package's cyclic Jacobi solver (tolerance 1e-12, at most 100 sweeps).

    Returns
    -------
    EigenBasis
        Eigenvalues sorted in descending order; each eigenvector is scaled
        so that its entry of largest magnitude is positive.
    """
    R = np.asarray(R, dtype=np.float64)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise InvalidDimensionError(f"expected a square matrix, got shape {R.shape}")
    if not np.all(np.isfinite(R)):
        raise InvalidInputError("matrix contains non-finite entries")
    scale = max(1.0, float(np.abs(R).max(initial=0.0)))
    asym = float(np.abs(R - R.T).max(initial=0.0))
    if asym > 1e-12 * scale:
        raise InvalidInputError(f"matrix is not symmetric (max |R - R^T| = {asym:.3e})")
    R = 0.5 * (R + R.T)

    if method == "jacobi":
        w, U = jacobi_eigh(R, tol=1e-12, max_sweeps=100)
    elif method == "lapack":
        try:
            w, U = np.linalg.eigh(R)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"LAPACK eigensolver failed: {exc}", iterations=-1) from exc
    else:
        raise InvalidParameterError(f"unknown eigensolver method {method!r}")

    order = np.argsort(-w, kind="stable")
    return EigenBasis(w[order], _fix_signs(U[:, order]))


def _basis_matrix(U):
    return np.asarray(U.eigenvectors if isinstance(U, EigenBasis) else U, dtype=np.float64)


def project(X, U):
    """Projections ``Y[m] = u_m^T X`` of the lagged vectors onto the basis."""
    X = np.asarray(X, dtype=np.float64)
    U = _basis_matrix(U)
    if X.ndim != 2 or U.shape[0] != X.shape[0]:
        raise InvalidDimensionError(f"basis of size {U.shape} does not match matrix {X.shape}")
    return U.T @ X


def noise_weights(eigenvalues, L):
    """Noise-floor weights ``sqrt(1 - eta / lambda_m)`` for the ``L`` leading components.

    ``eta`` is the mean of the ``M - L`` discarded eigenvalues (0 when
    ``L == M``). Discarded components get weight 0, and retained ones whose
    eigenvalue does not exceed ``eta`` are clamped to 0.
    """
    lam = np.asarray(eigenvalues, dtype=np.float64)
    M = lam.shape[0]
    if isinstance(L, bool) or int(L) != L or not 1 <= L <= M:
        raise InvalidDimensionError(f"L must satisfy 1 <= L <= {M}, got {L!r}")
    L = int(L)
    if np.any(np.diff(lam) > 0):
        raise InvalidInputError("eigenvalues must be sorted in descending order")
    eta = lam[L:].mean() if L < M else 0.0
    p = np.zeros(M)
    kept = lam[:L]
    ok = kept > eta
    p[:L][ok] = np.sqrt(1.0 - eta / kept[ok])
    return p


def reconstruct_matrix(U, p, X):
    """Weighted rank-one reconstruction ``sum_m p_m u_m u_m^T X``."""
    U = _basis_matrix(U)
    X = np.asarray(X, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    if X.ndim != 2 or U.shape[0] != X.shape[0] or p.shape != (U.shape[1],):
        raise InvalidDimensionError(
            f"incompatible shapes: basis {U.shape}, weights {p.shape}, matrix {X.shape}"
        )
    return (U * p) @ (U.T @ X)


def diagonal_average(Xhat, mode=Averaging.FILTERBANK):
    """Collapse an M x K matrix to a length ``M + K - 1`` signal along its diagonals.

    Sample ``n`` gathers the entries ``Xhat[i, k]`` with ``M - 1 - i + k == n``.

    Examples
    --------
    >>> diagonal_average([[1, 2], [3, 4]], "mean")
    array([3. , 2.5, 2. ])
    >>> diagonal_average([[1, 2], [3, 4]], "filterbank")
    array([1.5, 2.5, 1. ])
    """
    mode = Averaging(mode)
    A = np.asarray(Xhat, dtype=np.float64)
    if A.ndim != 2 or A.size == 0:
        raise InvalidDimensionError(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    M, K = A.shape
    N = M + K - 1
    sums = np.array([np.trace(A, offset=n - (M - 1)) for n in range(N)])
    if mode is Averaging.FILTERBANK:
        return sums / M
    n = np.arange(N)
    counts = np.minimum.reduce([n + 1, np.full(N, M), np.full(N, K), N - n])
    return sums / counts


def ssa_reconstruct(x, basis, weights, averaging=Averaging.FILTERBANK):
    """Classical matrix-path SSA reconstruction of ``x``.

    Builds the trajectory matrix, applies :func:`reconstruct_matrix` and
    averages the diagonals. With ``averaging="filterbank"`` the record is
    zero-padded by ``M - 1`` samples on both ends before embedding, so every
    output sample sees all ``M`` diagonal entries; the result then equals
    the zero-phase filter-bank output sample for sample.
    """
    averaging = Averaging(averaging)
    x = as_samples(x)
    U = _basis_matrix(basis)
    M = U.shape[0]
    N = x.shape[0]
    _check_window(M, N)
    if averaging is Averaging.FILTERBANK and M > 1:
        padded = np.concatenate([np.zeros(M - 1), x, np.zeros(M - 1)])
        out = diagonal_average(reconstruct_matrix(U, weights, embed(padded, M)), averaging)
        return out[M - 1 : M - 1 + N]
    return diagonal_average(reconstruct_matrix(U, weights, embed(x, M)), averaging)

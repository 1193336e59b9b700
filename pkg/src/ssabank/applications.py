"""Band grouping of filter-bank components and eigenvalue-ratio occupancy sensing."""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .core import CorrelationMode, as_samples, correlation_matrix, eig_sym, sample_rate_of
from .exceptions import InvalidDimensionError, InvalidParameterError
from .filterbank import DEFAULT_NFFT, Ordering, build_model
from .spectra import SpectrumEstimate, eigen_spectrum

__all__ = [
    "BandSpec",
    "GroupedComponents",
    "EigenvalueRatio",
    "SegmentResult",
    "SensingReport",
    "group_components",
    "eigenvalue_ratio",
    "sense",
    "calibrate_threshold",
    "EEG_BANDS",
]


@dataclass(frozen=True)
class BandSpec:
    """Ordered, non-overlapping half-open bands ``[lo, hi)``."""

    bands: tuple

    def __post_init__(self):
        bands = tuple((float(lo), float(hi)) for lo, hi in self.bands)
        for lo, hi in bands:
            if not lo < hi:
                raise InvalidParameterError(f"band [{lo}, {hi}) is empty or reversed")
        ordered = sorted(bands)
        for (_, hi), (lo, _) in zip(ordered, ordered[1:]):
            if lo < hi:
                raise InvalidParameterError(f"bands overlap near {lo}")
        object.__setattr__(self, "bands", bands)

    @classmethod
    def parse(cls, text):
        """Parse ``"lo:hi,lo:hi,..."``."""
        try:
            pairs = [tuple(float(v) for v in item.split(":")) for item in text.split(",") if item.strip()]
        except ValueError as exc:
            raise InvalidParameterError(f"cannot parse band list {text!r}") from exc
        if not pairs or any(len(p) != 2 for p in pairs):
            raise InvalidParameterError(f"cannot parse band list {text!r}")
        return cls(tuple(pairs))

    def __len__(self):
        return len(self.bands)

    def __iter__(self):
        return iter(self.bands)


# theta+alpha, beta and gamma ranges in Hz
EEG_BANDS = BandSpec(((2.0, 15.0), (15.0, 25.0), (25.0, 100.0)))


@dataclass(frozen=True)
class GroupedComponents:
    """Per-band sums of components plus the leftover (out-of-band) sum."""

    bands: BandSpec
    signals: np.ndarray  # (n_bands, N)
    leftover: np.ndarray  # (N,)
    members: tuple  # tuple of index arrays, one per band
    leftover_members: np.ndarray

    @property
    def counts(self):
        return tuple(len(m) for m in self.members)

    @property
    def leftover_count(self):
        return len(self.leftover_members)


def group_components(components, peaks, bands):
    """Sum the components whose filter peak falls in each band.

    Component ``m`` joins band ``b`` when ``lo_b <= peaks[m] < hi_b``;
    components outside every band are summed into the leftover signal.

    Parameters
    ----------
    components : ComponentSet or (M, N) array_like
    peaks : (M,) array_like
        Peak frequency of each component's filter, same order and units as
        the bands.
    bands : BandSpec or iterable of (lo, hi)
    """
    comps = np.asarray(getattr(components, "components", components), dtype=np.float64)
    peaks = np.asarray(peaks, dtype=np.float64)
    if not isinstance(bands, BandSpec):
        bands = BandSpec(tuple(bands))
    if comps.ndim != 2 or peaks.shape != (comps.shape[0],):
        raise InvalidDimensionError(
            f"{peaks.shape} peaks do not match components of shape {comps.shape}"
        )
    assigned = np.zeros(peaks.shape, dtype=bool)
    members, signals = [], []
    for lo, hi in bands:
        sel = (peaks >= lo) & (peaks < hi)
        assigned |= sel
        idx = np.flatnonzero(sel)
        members.append(idx)
        signals.append(comps[idx].sum(axis=0))
    rest = np.flatnonzero(~assigned)
    signals = np.array(signals).reshape(len(bands), comps.shape[1])
    return GroupedComponents(bands, signals, comps[rest].sum(axis=0), tuple(members), rest)


class EigenvalueRatio(NamedTuple):
    ratio: float
    clamped: bool


def eigenvalue_ratio(segment, M, mode=CorrelationMode.TOEPLITZ, method="lapack"):
    """Dynamic range ``lambda_max / lambda_min`` of a segment's correlation matrix.

    A smallest eigenvalue that is numerically zero (at most
    ``M * eps * lambda_max``) is replaced by ``eps * lambda_max`` and the
    result is flagged as clamped. An all-zero segment yields ``(1.0, True)``.
    """
    R = correlation_matrix(segment, M, mode)
    return _ratio_from_eigenvalues(eig_sym(R, method=method).eigenvalues, R.shape[0])


@dataclass(frozen=True)
class SegmentResult:
    index: int
    ratio: float
    clamped: bool
    occupied: bool
    spectrum: Optional[SpectrumEstimate] = None

    @property
    def ratio_db(self):
        return 10.0 * np.log10(self.ratio)


@dataclass(frozen=True)
class SensingReport:
    segments: tuple
    threshold: float
    segment_len: int
    M: int
    mode: CorrelationMode = CorrelationMode.TOEPLITZ

    @property
    def ratios(self):
        return np.array([s.ratio for s in self.segments])

    @property
    def decisions(self):
        return np.array([s.occupied for s in self.segments])

    def rows(self):
        """``(index, ratio, ratio_db, decision)`` tuples for tabular output."""
        return [(s.index, s.ratio, s.ratio_db, int(s.occupied)) for s in self.segments]


def sense(
    x,
    segment_len,
    M,
    threshold,
    mode=CorrelationMode.TOEPLITZ,
    emit_spectra=False,
    nfft=DEFAULT_NFFT,
    sample_rate=None,
):
    """Eigenvalue-ratio occupancy detection on consecutive segments.

    ``x`` is cut into ``len(x) // segment_len`` segments (the remainder is
    dropped); a segment is declared occupied when its ratio exceeds
    ``threshold``. With ``emit_spectra`` each segment also carries its
    peak-ordered eigen-spectrum.
    """
    fs = float(sample_rate) if sample_rate is not None else sample_rate_of(x)
    samples = as_samples(x)
    segment_len = int(segment_len)
    if segment_len < M:
        raise InvalidDimensionError(f"segment_len={segment_len} is shorter than M={M}")
    n_seg = samples.shape[0] // segment_len
    if n_seg < 1:
        raise InvalidDimensionError("signal is shorter than one segment")
    if not np.isfinite(threshold):
        raise InvalidParameterError(f"threshold must be finite, got {threshold}")

    results = []
    for i in range(n_seg):
        seg = samples[i * segment_len : (i + 1) * segment_len]
        if emit_spectra:
            model = build_model(seg, M, mode, Ordering.PEAK, nfft, sample_rate=fs)
            spectrum = eigen_spectrum(model)
            ratio = _ratio_from_eigenvalues(model.eigenvalues, M)
        else:
            spectrum = None
            ratio = eigenvalue_ratio(seg, M, mode)
        results.append(SegmentResult(i, ratio.ratio, ratio.clamped, ratio.ratio > threshold, spectrum))
    return SensingReport(tuple(results), float(threshold), segment_len, int(M), CorrelationMode(mode))


def _ratio_from_eigenvalues(lam, M):
    top, bottom = float(np.max(lam)), float(np.min(lam))
    eps = np.finfo(np.float64).eps
    if top <= 0.0:
        return EigenvalueRatio(1.0, True)
    if bottom <= M * eps * top:
        return EigenvalueRatio(float(1.0 / eps), True)
    return EigenvalueRatio(top / bottom, False)


def calibrate_threshold(ratios, labels):
    """Geometric mean of the median ratio of the idle and occupied classes."""
    ratios = np.asarray(ratios, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    if ratios.shape != labels.shape:
        raise InvalidDimensionError("ratios and labels must have the same length")
    if labels.all() or not labels.any():
        raise InvalidParameterError("calibration needs both idle and occupied segments")
    return float(np.sqrt(np.median(ratios[labels]) * np.median(ratios[~labels])))

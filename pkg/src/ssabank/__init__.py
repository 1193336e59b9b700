"""Singular spectrum analysis as a bank of zero-phase eigenfilters.

The eigenvectors of a signal's lagged correlation matrix define FIR filters
whose outputs add up to the input. This package builds those filters,
locates their response maxima, groups components by frequency band,
estimates power spectra from the eigenvalues and detects channel occupancy
from the eigenvalue spread.
"""

__version__ = "0.1.0"

from .applications import (
    EEG_BANDS,
    BandSpec,
    GroupedComponents,
    SensingReport,
    calibrate_threshold,
    eigenvalue_ratio,
    group_components,
    sense,
)
from .core import (
    Averaging,
    CorrelationMode,
    EigenBasis,
    TimeSeries,
    autocorrelation,
    correlation_matrix,
    diagonal_average,
    eig_sym,
    embed,
    noise_weights,
    project,
    reconstruct_matrix,
    ssa_reconstruct,
)
from .exceptions import (
    ConvergenceError,
    InvalidDimensionError,
    InvalidInputError,
    InvalidParameterError,
    SSAError,
)
from .filterbank import (
    ComponentFilter,
    ComponentSet,
    FrequencyResponse,
    Ordering,
    SsaModel,
    build_model,
    extract_components,
    filter_coefficients,
    frequency_response,
    noise_floor_weights,
    peak_frequency,
    top_weights,
)
from .signalgen import GenSpec, SignalKind, gaussian_noise, generate, tone
from .spectra import SpectrumEstimate, autocorr_psd, eigen_spectrum, local_maxima, welch_psd

"""Sparse spiked covariance / spiked Wigner samplers, reductions, and harness."""

from .core import (
    DerivedConstants,
    ExponentPoint,
    ParameterError,
    PsiRangeError,
    Region,
    ScParams,
    Thresholds,
    WigParams,
    canonical_map,
    classify_region,
    derive_constants,
    thresholds,
)
from .sampling import (
    ScSample,
    SeedStream,
    SparseSignal,
    WigSample,
    sample_goe,
    sample_sc,
    sample_sparse_signal,
    sample_wig,
)

__all__ = [
    "DerivedConstants",
    "ExponentPoint",
    "ParameterError",
    "PsiRangeError",
    "Region",
    "ScParams",
    "ScSample",
    "SeedStream",
    "SparseSignal",
    "Thresholds",
    "WigParams",
    "WigSample",
    "canonical_map",
    "classify_region",
    "derive_constants",
    "sample_goe",
    "sample_sc",
    "sample_sparse_signal",
    "sample_wig",
    "thresholds",
]

__version__ = "0.1.0"

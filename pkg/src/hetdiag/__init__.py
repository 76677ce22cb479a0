"""Diagnostics for OLS with a binary treatment and heterogeneous effects.

The OLS coefficient on a binary treatment is a weighted average of average
partial linear effects on the treated and on the untreated, and the weight
on each group shrinks as that group grows. ``hetdiag`` computes those
weights, the implied ATE/ATT/ATU analogues, and a few corrective
estimators.
"""

__version__ = "0.1.0"

from .errors import (
    Assumption2Error,
    AssumptionError,
    BadConfigError,
    DataError,
    DegenerateGroupError,
    HetDiagError,
    IdentityBrokenError,
    NoVariationError,
    NonpositiveWeightError,
    RankDeficientError,
    SchemaError,
    TooManyFailuresError,
    TreatmentNotBinaryError,
)
from .ingest import Dataset, ValidationReport, from_frame, load_csv
from .linproj import ProjectionFit, add_intercept, fit_ols, fit_wls, hc1_vcov
from .diagnostics import (
    ApleComponents,
    BiasDecomposition,
    DiagnosticsReport,
    GroupMoments,
    OlsWeights,
    PropensityFit,
    aple_components,
    aple_effects,
    decompose_bias,
    diagnose,
    diff_in_means_check,
    group_moments,
    hypothetical_weight,
    ols_weights,
    propensity_lpm,
)
from .estimators import (
    RaEstimates,
    downweight_untreated,
    regression_adjustment,
    wls_correction,
)
from .inference import BootstrapResult, pairs_bootstrap

__all__ = [
    "ApleComponents",
    "Assumption2Error",
    "AssumptionError",
    "BadConfigError",
    "BiasDecomposition",
    "BootstrapResult",
    "DataError",
    "Dataset",
    "DegenerateGroupError",
    "DiagnosticsReport",
    "GroupMoments",
    "HetDiagError",
    "IdentityBrokenError",
    "NoVariationError",
    "NonpositiveWeightError",
    "OlsWeights",
    "ProjectionFit",
    "PropensityFit",
    "RaEstimates",
    "RankDeficientError",
    "SchemaError",
    "TooManyFailuresError",
    "TreatmentNotBinaryError",
    "ValidationReport",
    "add_intercept",
    "aple_components",
    "aple_effects",
    "decompose_bias",
    "diagnose",
    "diff_in_means_check",
    "downweight_untreated",
    "fit_ols",
    "fit_wls",
    "from_frame",
    "group_moments",
    "hc1_vcov",
    "hypothetical_weight",
    "load_csv",
    "ols_weights",
    "pairs_bootstrap",
    "propensity_lpm",
    "regression_adjustment",
    "wls_correction",
]

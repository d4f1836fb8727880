"""Sufficient-component-cause model of binary prognostic markers and their
transportation between populations."""

from .core import (
    CauseProbabilities,
    ContingencyTable,
    DegenerateMarker,
    DegenerateUniversalCause,
    InvalidCauses,
    InvalidTable,
    PerformanceMetrics,
    RiskEquation,
    SCCError,
    StabilityIndices,
    UndefinedIndex,
    UndefinedMetric,
    causes_to_table,
    metrics,
    prevalence_from_causes,
    risk_equation,
    stability_indices,
    symmetric_setup_table,
    table_to_causes,
)
from .divergence import kl_divergence
from .transport import (
    CubicCoefficients,
    DegenerateAccuracy,
    DegenerateCauses,
    Method,
    SolverError,
    TargetOutOfRange,
    TransportResult,
    apply_odds_ratio,
    cubic_coefficients,
    cubic_positive_root,
    logit_adjustment_check,
    proportional_odds_objective,
    solve_common_odds_ratio,
    transport_by_accuracy,
    transport_by_predictive_values,
    transport_proportional_odds,
)

__version__ = "0.1.0"

"""Gain certification: bounds, conditions, thresholds and the report."""

from s2track.certification.bounds import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    SAFETY_FACTOR,
    Envelope,
    BoundEstimates,
    lambda_J,
    lambda_J_symmetric,
    estimate_bounds,
)
from s2track.certification.conditions import (
    PSI_GRID,
    Condition,
    Thresholds,
    validate_gains,
    w_matrices,
    w_eigen_extremes,
    thresholds_and_radius,
    check_set_containment,
)
from s2track.certification.report import (
    CertificationReport,
    certify,
    certify_with_bounds,
    radius_versus_gain_scale,
)

__all__ = [
    "DEFAULT_SAMPLES",
    "DEFAULT_SEED",
    "SAFETY_FACTOR",
    "Envelope",
    "BoundEstimates",
    "lambda_J",
    "lambda_J_symmetric",
    "estimate_bounds",
    "PSI_GRID",
    "Condition",
    "Thresholds",
    "validate_gains",
    "w_matrices",
    "w_eigen_extremes",
    "thresholds_and_radius",
    "check_set_containment",
    "CertificationReport",
    "certify",
    "certify_with_bounds",
    "radius_versus_gain_scale",
]

"""Core value types and the exception hierarchy."""

from s2track.core.errors import (
    S2TrackError,
    NotSkewError,
    DegenerateMatrixError,
    AntipodalError,
    SingularInertiaError,
    InvalidGainStructureError,
    NotCertifiableError,
    TooFewSamplesError,
    EnvelopeViolationError,
    ScenarioAborted,
    ConfigParseError,
    ConfigValidationError,
)
from s2track.core.states import BodyState, ReferenceState
from s2track.core.parameters import RigidBody, InertiaModel, Gains

__all__ = [
    "S2TrackError",
    "NotSkewError",
    "DegenerateMatrixError",
    "AntipodalError",
    "SingularInertiaError",
    "InvalidGainStructureError",
    "NotCertifiableError",
    "TooFewSamplesError",
    "EnvelopeViolationError",
    "ScenarioAborted",
    "ConfigParseError",
    "ConfigValidationError",
    "BodyState",
    "ReferenceState",
    "RigidBody",
    "InertiaModel",
    "Gains",
]

"""Exception hierarchy shared by every s2track module."""

from typing import Any, Optional


class S2TrackError(Exception):
    """Base class for all s2track errors."""


class NotSkewError(S2TrackError, ValueError):
    """A matrix handed to ``vee`` is not skew-symmetric within tolerance."""


class DegenerateMatrixError(S2TrackError, ArithmeticError):
    """A matrix is too close to singular to be projected onto SO(3)."""


class AntipodalError(S2TrackError, ArithmeticError):
    """Pointing direction and its reference are (nearly) antipodal."""

    def __init__(self, cosine: float):
        self.cosine = cosine
        super().__init__(
            f"Pointing direction is antipodal to the reference "
            f"(q·q_d = {cosine:.12g}); the configuration error is undefined there"
        )


class SingularInertiaError(S2TrackError, ArithmeticError):
    """An inertia matrix is not invertible (or not positive definite)."""


class InvalidGainStructureError(S2TrackError, ValueError):
    """The gain split gamma = gamma1 + gamma2 + gamma3, gamma3 = gamma4 + gamma5 is broken."""


class NotCertifiableError(S2TrackError, ValueError):
    """The envelope radius or velocity threshold cannot be formed."""


class TooFewSamplesError(S2TrackError, ValueError):
    """A trace is too short for the requested finite-difference stencil."""


class EnvelopeViolationError(S2TrackError, ValueError):
    """A scenario leaves the envelope its certificate was computed for."""


class ScenarioAborted(S2TrackError, RuntimeError):
    """
    A simulation stopped early.

    Attributes:
        reason: Short machine-readable cause ('antipodal' or 'non_finite')
        time: Simulation time of the last good record
        last_state: Last good ``BodyState``
        trajectory: Records produced before the abort (a DataFrame)
    """

    def __init__(
        self,
        reason: str,
        message: str,
        time: float,
        last_state: Any = None,
        trajectory: Optional[Any] = None,
    ):
        self.reason = reason
        self.time = time
        self.last_state = last_state
        self.trajectory = trajectory
        super().__init__(f"Scenario aborted at t = {time:.6g} s ({reason}): {message}")


class ConfigParseError(S2TrackError, ValueError):
    """Scenario text could not be parsed, or a required key is missing."""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
    ):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column else ")")
        super().__init__(f"{message}{where}")


class ConfigValidationError(S2TrackError, ValueError):
    """A parsed scenario field violates a constraint."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"Invalid value for '{field}': {message}")

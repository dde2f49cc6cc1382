"""Error geometry on S² and the tracking control law."""

from s2track.control.error_geometry import (
    EPS_ANTIPODAL,
    ErrorState,
    pointing_direction,
    attitude_error_psi,
    config_error,
    velocity_error,
    error_kinematics,
    eq_dot,
    feedforward_d,
    feedforward_d_alt,
    tracking_errors,
)
from s2track.control.law import (
    ControlOutput,
    AttitudeController,
    drift_f,
    sliding_surface,
    control_moment,
)

__all__ = [
    "EPS_ANTIPODAL",
    "ErrorState",
    "pointing_direction",
    "attitude_error_psi",
    "config_error",
    "velocity_error",
    "error_kinematics",
    "eq_dot",
    "feedforward_d",
    "feedforward_d_alt",
    "tracking_errors",
    "ControlOutput",
    "AttitudeController",
    "drift_f",
    "sliding_surface",
    "control_moment",
]

"""
s2track - pointing and angular-velocity tracking on S² for a rigid body.

A sliding-surface controller for the pointing direction of a rigid body,
a certifier that checks its gains against an operating envelope and reports
the ultimate-bound radius, and an RK4 closed-loop simulator that monitors
the Lyapunov function along the way.
"""

from s2track.__version__ import __version__
from s2track.core import (
    S2TrackError,
    AntipodalError,
    ScenarioAborted,
    BodyState,
    ReferenceState,
    RigidBody,
    InertiaModel,
    Gains,
)
from s2track.utils import hat, vee, exp_rodrigues, reorthonormalize
from s2track.control import (
    ErrorState,
    tracking_errors,
    control_moment,
    AttitudeController,
)
from s2track.certification import (
    Envelope,
    BoundEstimates,
    CertificationReport,
    estimate_bounds,
    certify,
    radius_versus_gain_scale,
)
from s2track.monitor import LyapunovSample, lyapunov_value, sandwich_check
from s2track.sim import (
    PlantParams,
    ReferenceProfile,
    RunSummary,
    rk4_step,
    simulate,
    run_scenario,
)
from s2track.data import ScenarioConfig, parse_config, load_config

__all__ = [
    "__version__",
    "S2TrackError",
    "AntipodalError",
    "ScenarioAborted",
    "BodyState",
    "ReferenceState",
    "RigidBody",
    "InertiaModel",
    "Gains",
    "hat",
    "vee",
    "exp_rodrigues",
    "reorthonormalize",
    "ErrorState",
    "tracking_errors",
    "control_moment",
    "AttitudeController",
    "Envelope",
    "BoundEstimates",
    "CertificationReport",
    "estimate_bounds",
    "certify",
    "radius_versus_gain_scale",
    "LyapunovSample",
    "lyapunov_value",
    "sandwich_check",
    "PlantParams",
    "ReferenceProfile",
    "RunSummary",
    "rk4_step",
    "simulate",
    "run_scenario",
    "ScenarioConfig",
    "parse_config",
    "load_config",
]

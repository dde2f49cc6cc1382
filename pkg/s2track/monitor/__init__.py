"""Lyapunov monitors evaluated along simulated trajectories."""

from s2track.monitor.lyapunov import (
    SANDWICH_ATOL,
    SANDWICH_RTOL,
    DECREASE_TOL,
    LyapunovSample,
    lyapunov_value,
    sandwich_check,
    lyapunov_sample,
    decay_envelope,
    finite_difference_rate,
    vdot_finite_difference,
    sliding_rate,
    decrease_violations,
)

__all__ = [
    "SANDWICH_ATOL",
    "SANDWICH_RTOL",
    "DECREASE_TOL",
    "LyapunovSample",
    "lyapunov_value",
    "sandwich_check",
    "lyapunov_sample",
    "decay_envelope",
    "finite_difference_rate",
    "vdot_finite_difference",
    "sliding_rate",
    "decrease_violations",
]

"""
Reference attitude profiles.

Every profile spins the reference about one fixed body axis ``a`` with signed
rate ``theta_dot(t)``, so

    wd_b(t)  = theta_dot(t) a
    Q_d(t)   = Q_d0 exp(theta(t) a^x)

and all quantities have closed forms. Spinning about the pointing axis leaves
the desired pointing direction fixed.
"""

from dataclasses import dataclass, field

import numpy as np

from s2track.core.states import ReferenceState
from s2track.utils.rotations import E3, exp_rodrigues, is_rotation, unit

KINDS = ("constant_spin", "sinusoid", "ramp_then_hold")


@dataclass(frozen=True, eq=False)
class ReferenceProfile:
    """
    Desired angular-velocity profile about a fixed body axis.

    Args:
        kind: 'constant_spin', 'sinusoid' or 'ramp_then_hold'
        axis: Body-frame rotation axis (normalized on construction)
        Qd0: Reference attitude at t = 0
        rate: Spin rate for 'constant_spin'; final rate for 'ramp_then_hold' (rad/s)
        amplitude: Peak rate of 'sinusoid' (rad/s)
        frequency: Frequency of 'sinusoid' (Hz)
        ramp_time: Duration of the ramp in 'ramp_then_hold' (s)
    """

    kind: str = "constant_spin"
    axis: np.ndarray = field(default_factory=lambda: E3.copy())
    Qd0: np.ndarray = field(default_factory=lambda: np.eye(3))
    rate: float = 0.0
    amplitude: float = 0.0
    frequency: float = 0.0
    ramp_time: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"Unknown reference kind '{self.kind}'. Choose from: {', '.join(KINDS)}")
        object.__setattr__(self, "axis", unit(self.axis))
        Qd0 = np.asarray(self.Qd0, dtype=float)
        if not is_rotation(Qd0):
            raise ValueError("Reference 'Qd0' must be a rotation matrix")
        object.__setattr__(self, "Qd0", Qd0)
        if self.kind == "sinusoid" and not self.frequency > 0:
            raise ValueError(f"Sinusoid frequency must be positive, got {self.frequency!r}")
        if self.kind == "ramp_then_hold" and not self.ramp_time > 0:
            raise ValueError(f"Ramp time must be positive, got {self.ramp_time!r}")

    def angle(self, t: float) -> float:
        """Accumulated rotation angle theta(t)."""
        if self.kind == "constant_spin":
            return self.rate * t
        if self.kind == "sinusoid":
            omega = 2.0 * np.pi * self.frequency
            return self.amplitude * (1.0 - np.cos(omega * t)) / omega
        T = self.ramp_time
        if t < T:
            return 0.5 * self.rate * t * t / T
        return self.rate * (0.5 * T + (t - T))

    def angular_rate(self, t: float) -> float:
        if self.kind == "constant_spin":
            return self.rate
        if self.kind == "sinusoid":
            return self.amplitude * np.sin(2.0 * np.pi * self.frequency * t)
        return self.rate * min(t / self.ramp_time, 1.0)

    def angular_acceleration(self, t: float) -> float:
        if self.kind == "constant_spin":
            return 0.0
        if self.kind == "sinusoid":
            omega = 2.0 * np.pi * self.frequency
            return self.amplitude * omega * np.cos(omega * t)
        return self.rate / self.ramp_time if t < self.ramp_time else 0.0

    @property
    def peak_rate(self) -> float:
        """Sup over t of |wd_b(t)|."""
        return abs(self.amplitude) if self.kind == "sinusoid" else abs(self.rate)

    @property
    def peak_acceleration(self) -> float:
        """Sup over t of |wd_dot_b(t)|."""
        if self.kind == "constant_spin":
            return 0.0
        if self.kind == "sinusoid":
            return abs(self.amplitude) * 2.0 * np.pi * self.frequency
        return abs(self.rate) / self.ramp_time

    def state_at(self, t: float) -> ReferenceState:
        """Closed-form reference at time ``t``."""
        return ReferenceState(
            Qd=self.Qd0 @ exp_rodrigues(self.axis, self.angle(t)),
            wd_b=self.angular_rate(t) * self.axis,
            wd_dot_b=self.angular_acceleration(t) * self.axis,
        )


def reference_step(
    profile: ReferenceProfile, ref: ReferenceState, t: float, dt: float
) -> ReferenceState:
    """
    Advance the reference from ``t`` to ``t + dt``.

    Q_d is stepped multiplicatively by the exact angle increment about the
    profile axis; the rates are evaluated analytically at ``t + dt``.

    Args:
        profile: Reference profile
        ref: Reference at time ``t``
        t: Current time (>= 0)
        dt: Step size

    Returns:
        ReferenceState at ``t + dt``
    """
    t_next = t + dt
    increment = profile.angle(t_next) - profile.angle(t)
    return ReferenceState(
        Qd=ref.Qd @ exp_rodrigues(profile.axis, increment),
        wd_b=profile.angular_rate(t_next) * profile.axis,
        wd_dot_b=profile.angular_acceleration(t_next) * profile.axis,
    )

"""Kinematic state containers for the body and its reference."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class BodyState:
    """
    Attitude and body-frame angular velocity of the rigid body.

    Args:
        Q: Body-to-world rotation matrix
        w_b: Angular velocity in the body frame (rad/s)
    """

    Q: np.ndarray
    w_b: np.ndarray

    def as_vector(self) -> np.ndarray:
        """Flatten to ``[Q (row-major, 9), w_b (3)]``."""
        return np.concatenate((np.ravel(self.Q), self.w_b))

    @classmethod
    def from_vector(cls, y: np.ndarray) -> "BodyState":
        """Inverse of :meth:`as_vector`."""
        return cls(Q=np.reshape(y[:9], (3, 3)), w_b=np.array(y[9:12]))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.Q)) and np.all(np.isfinite(self.w_b)))


@dataclass(frozen=True, eq=False)
class ReferenceState:
    """
    Desired attitude and angular-velocity profile at one instant.

    Args:
        Qd: Desired body-to-world rotation
        wd_b: Desired body-frame angular velocity (rad/s)
        wd_dot_b: Its time derivative (rad/s^2)
    """

    Qd: np.ndarray
    wd_b: np.ndarray
    wd_dot_b: np.ndarray

    @classmethod
    def fixed(cls, Qd: np.ndarray) -> "ReferenceState":
        """A motionless reference at attitude ``Qd``."""
        return cls(Qd=np.asarray(Qd, dtype=float), wd_b=np.zeros(3), wd_dot_b=np.zeros(3))

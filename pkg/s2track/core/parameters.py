"""Physical and controller parameters."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from s2track.core.errors import InvalidGainStructureError, SingularInertiaError

_INERTIA_RTOL = 1e-12


def _check_inertia(J: np.ndarray, name: str) -> np.ndarray:
    J = np.asarray(J, dtype=float)
    if J.shape != (3, 3) or not np.all(np.isfinite(J)):
        raise SingularInertiaError(f"{name} must be a finite 3x3 matrix, got {J.tolist()}")
    scale = np.linalg.norm(J)
    if np.linalg.norm(J - J.T) > _INERTIA_RTOL * max(scale, 1.0):
        raise SingularInertiaError(f"{name} is not symmetric: {J.tolist()}")
    lam_min = np.linalg.eigvalsh(J)[0]
    if not lam_min > _INERTIA_RTOL * scale:
        raise SingularInertiaError(
            f"{name} is not positive definite (smallest eigenvalue {lam_min:.3e})"
        )
    return J


@dataclass(frozen=True, eq=False)
class RigidBody:
    """
    One side of the inertia model: either the true plant (J, c, tau) or the
    controller's estimate (J_hat, c, tau_hat).

    Args:
        J: Inertia matrix (kg m^2), symmetric positive definite
        c: Rotational damping coefficient (N m s)
        tau: Constant exogenous torque (N m)
    """

    J: np.ndarray
    c: float = 0.0
    tau: np.ndarray = field(default_factory=lambda: np.zeros(3))
    J_inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        J = _check_inertia(self.J, "inertia")
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "tau", np.asarray(self.tau, dtype=float))
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "J_inv", np.linalg.inv(J))

    def scaled(self, alpha: float) -> "RigidBody":
        """The same body with J, c and tau all multiplied by ``alpha``."""
        return RigidBody(J=alpha * self.J, c=alpha * self.c, tau=alpha * self.tau)


@dataclass(frozen=True, eq=False)
class InertiaModel:
    """
    True inertia and its estimate.

    ``tau_hat`` defaults to ``tau``, so that model error enters through
    ``J_hat`` only unless a scenario says otherwise.
    """

    J: np.ndarray
    J_hat: np.ndarray
    c: float = 0.0
    tau: np.ndarray = field(default_factory=lambda: np.zeros(3))
    tau_hat: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "J", _check_inertia(self.J, "J"))
        object.__setattr__(self, "J_hat", _check_inertia(self.J_hat, "J_hat"))
        tau = np.asarray(self.tau, dtype=float)
        object.__setattr__(self, "tau", tau)
        tau_hat = tau.copy() if self.tau_hat is None else np.asarray(self.tau_hat, dtype=float)
        object.__setattr__(self, "tau_hat", tau_hat)

    @property
    def plant(self) -> RigidBody:
        return RigidBody(J=self.J, c=self.c, tau=self.tau)

    @property
    def estimate(self) -> RigidBody:
        return RigidBody(J=self.J_hat, c=self.c, tau=self.tau_hat)

    @property
    def delta_J(self) -> np.ndarray:
        """``I - J^-1 J_hat``, formed as ``J^-1 (J - J_hat)`` so it is exactly zero for J_hat = J."""
        return np.linalg.solve(self.J, self.J - self.J_hat)

    @property
    def perfect_knowledge(self) -> bool:
        return bool(np.array_equal(self.J, self.J_hat) and np.array_equal(self.tau, self.tau_hat))


@dataclass(frozen=True)
class Gains:
    """
    Controller gains.

    The user supplies (Lambda, eta, gamma1, gamma2, gamma4, gamma5);
    gamma3 = gamma4 + gamma5 and gamma = gamma1 + gamma2 + gamma3 are derived so
    the split structure cannot be violated.
    """

    Lambda: float
    eta: float
    gamma1: float
    gamma2: float
    gamma4: float
    gamma5: float

    def __post_init__(self):
        for name in ("Lambda", "eta", "gamma1", "gamma2", "gamma4", "gamma5"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InvalidGainStructureError(
                    f"Gain '{name}' must be a finite positive number, got {value!r}"
                )

    @property
    def gamma3(self) -> float:
        return self.gamma4 + self.gamma5

    @property
    def gamma(self) -> float:
        return self.gamma1 + self.gamma2 + self.gamma3

    def kappa(self, lambda_J: float) -> float:
        """Weight of the attitude error function in the Lyapunov candidate."""
        return 2.0 * self.eta * self.Lambda * (self.gamma2 + self.gamma3) * lambda_J

    def scaled(self, factor: float) -> "Gains":
        """Every gamma_i multiplied by ``factor``; Lambda and eta unchanged."""
        return Gains(
            Lambda=self.Lambda,
            eta=self.eta,
            gamma1=factor * self.gamma1,
            gamma2=factor * self.gamma2,
            gamma4=factor * self.gamma4,
            gamma5=factor * self.gamma5,
        )

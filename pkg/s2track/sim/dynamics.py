"""Rigid-body rotational dynamics and the fixed-step integrator on SO(3) x R^3."""

from dataclasses import dataclass, field
from typing import Callable, Tuple, Union

import numpy as np

from s2track.core.parameters import InertiaModel, RigidBody
from s2track.core.states import BodyState
from s2track.utils.rotations import E3, hat, reorthonormalize, unit

MAX_DT = 0.01

ControlInput = Union[np.ndarray, Callable[[float, BodyState], np.ndarray], None]


@dataclass(frozen=True, eq=False)
class PlantParams:
    """
    The simulated body.

    Only the true side of ``model`` is ever read by the plant.

    Args:
        model: True inertia and its estimate
        r_body: Body pointing axis
    """

    model: InertiaModel
    r_body: np.ndarray = field(default_factory=lambda: E3.copy())
    body: RigidBody = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "r_body", unit(self.r_body))
        object.__setattr__(self, "body", self.model.plant)


def _true_body(params: Union[PlantParams, RigidBody]) -> RigidBody:
    return params.body if isinstance(params, PlantParams) else params


def _angular_acceleration(body: RigidBody, w: np.ndarray, u: np.ndarray) -> np.ndarray:
    return body.J_inv @ (np.cross(body.J @ w, w) - body.c * w + body.tau + u)


def plant_derivative(
    state: BodyState,
    u: np.ndarray,
    params: Union[PlantParams, RigidBody],
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Attitude kinematics and Euler's equations with damping and a constant torque.

        dQ/dt  = Q w^x
        dw/dt  = J^-1 ((J w) x w - c w + tau + u)

    Args:
        state: Current attitude and body rate
        u: Control moment (body frame)
        params: Plant parameters, or the true body directly

    Returns:
        ``(Qdot, wdot)``
    """
    body = _true_body(params)
    return state.Q @ hat(state.w_b), _angular_acceleration(body, state.w_b, u)


def rk4(
    deriv: Callable[[float, np.ndarray], np.ndarray],
    t: float,
    y: np.ndarray,
    dt: float,
) -> np.ndarray:
    """One classical fourth-order Runge-Kutta step of ``dy/dt = deriv(t, y)``."""
    k1 = deriv(t, y)
    k2 = deriv(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = deriv(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = deriv(t + dt, y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_step(
    state: BodyState,
    params: Union[PlantParams, RigidBody],
    dt: float,
    control: ControlInput = None,
    t: float = 0.0,
) -> BodyState:
    """
    Advance the closed loop by one step.

    ``control`` selects how the moment enters the step:

    * an array is held over the whole step (zero-order hold)
    * a callable ``control(t, state)`` is re-evaluated at every stage
    * ``None`` means no control moment

    Q is projected back onto SO(3) after the step. A non-finite result is
    returned unprojected so the caller can report it.

    Args:
        state: State at the start of the step
        params: Plant parameters, or the true body directly
        dt: Step size in (0, 0.01] s
        control: Held moment, stage-wise control callable, or None
        t: Time at the start of the step

    Returns:
        BodyState at ``t + dt``
    """
    if not (0.0 < dt <= MAX_DT):
        raise ValueError(f"Step size must lie in (0, {MAX_DT}] s, got {dt!r}")
    body = _true_body(params)

    if control is None:
        held = np.zeros(3)
    elif callable(control):
        held = None
    else:
        held = np.asarray(control, dtype=float)

    def deriv(tau: float, y: np.ndarray) -> np.ndarray:
        Q = y[:9].reshape(3, 3)
        w = y[9:]
        u = held if held is not None else control(tau, BodyState(Q=Q, w_b=w))
        return np.concatenate(((Q @ hat(w)).ravel(), _angular_acceleration(body, w, u)))

    y = rk4(deriv, t, state.as_vector(), dt)
    stepped = BodyState.from_vector(y)
    if not stepped.is_finite():
        return stepped
    return BodyState(Q=reorthonormalize(stepped.Q), w_b=stepped.w_b)

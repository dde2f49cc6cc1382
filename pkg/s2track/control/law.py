"""Sliding-surface control moment for pointing and angular-velocity tracking."""

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from s2track.control.error_geometry import ErrorState, feedforward_d, tracking_errors
from s2track.core.parameters import Gains, InertiaModel, RigidBody
from s2track.core.states import BodyState, ReferenceState
from s2track.utils.rotations import E3


@dataclass(frozen=True, eq=False)
class ControlOutput:
    """
    Control moment together with the intermediates used to form it.

    Args:
        u: Control moment in the body frame (N m)
        s: Sliding-surface value
        f_hat: Estimated drift (rad/s^2)
        d: Reference feedforward term (rad/s^2)
        errors: Tracking errors at the evaluation instant
    """

    u: np.ndarray
    s: np.ndarray
    f_hat: np.ndarray
    d: np.ndarray
    errors: ErrorState


def drift_f(body: RigidBody, w_b: np.ndarray) -> np.ndarray:
    """
    Drift ``f = J^-1 ((J w) x w - c w + tau)``.

    Called with the true body for the plant and with the estimate for the
    controller's ``f_hat``.
    """
    return body.J_inv @ (np.cross(body.J @ w_b, w_b) - body.c * w_b + body.tau)


def sliding_surface(
    psi: float, e_q: np.ndarray, e_w: np.ndarray, gains: Gains
) -> np.ndarray:
    """Sliding surface ``s = (Lambda + Psi) e_q + eta e_w``."""
    return (gains.Lambda + psi) * e_q + gains.eta * e_w


def control_moment(
    state: BodyState,
    ref: ReferenceState,
    model: Union[InertiaModel, RigidBody],
    gains: Gains,
    r_body: np.ndarray = E3,
) -> ControlOutput:
    """
    Control moment

        u = eta^-1 J_hat (-eta (f_hat + d) - (Lambda + Psi) de_q - dPsi e_q - gamma s)

    with ``dPsi = e_q·e_w`` and ``de_q = E e_w + Xi wd_b`` evaluated from the
    measured state. Only the estimated side of ``model`` is read.

    Args:
        state: Measured attitude and rate
        ref: Reference at the same instant
        model: Inertia model (its estimate is used) or the estimate itself
        gains: Controller gains
        r_body: Body pointing axis

    Returns:
        ControlOutput

    Raises:
        AntipodalError: If the pointing directions are antipodal
    """
    estimate = model.estimate if isinstance(model, InertiaModel) else model
    err = tracking_errors(state, ref, r_body)

    f_hat = drift_f(estimate, state.w_b)
    d = feedforward_d(state, ref)
    s = sliding_surface(err.psi, err.e_q, err.e_w, gains)
    eq_dot = err.E @ err.e_w + err.Xi @ ref.wd_b

    inner = (
        -gains.eta * (f_hat + d)
        - (gains.Lambda + err.psi) * eq_dot
        - err.psi_dot * err.e_q
        - gains.gamma * s
    )
    u = estimate.J @ inner / gains.eta
    return ControlOutput(u=u, s=s, f_hat=f_hat, d=d, errors=err)


@dataclass(frozen=True, eq=False)
class AttitudeController:
    """
    Controller bound to an inertia estimate and a gain set.

    Holds only the estimated body, never the true inertia.
    """

    estimate: RigidBody
    gains: Gains
    r_body: np.ndarray = field(default_factory=lambda: E3.copy())

    @classmethod
    def from_model(
        cls, model: InertiaModel, gains: Gains, r_body: np.ndarray = E3
    ) -> "AttitudeController":
        return cls(estimate=model.estimate, gains=gains, r_body=np.asarray(r_body, dtype=float))

    def __call__(self, state: BodyState, ref: ReferenceState) -> ControlOutput:
        return control_moment(state, ref, self.estimate, self.gains, self.r_body)

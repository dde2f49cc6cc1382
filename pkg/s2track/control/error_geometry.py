"""
Tracking errors of a body pointing direction on S².

The pointing direction of the body is ``q = Q r_body`` and that of the
reference ``q_d = Q_d r_body``. With ``n = sqrt(2 (1 + q·q_d))``:

    Psi   = 2 - n                              attitude error function
    e_q   = Q^T (q_d x q) / n                  configuration error (body frame)
    e_w   = w_b - Q^T Q_d wd_b                 angular-velocity error

These satisfy ``dPsi/dt = e_q·e_w`` and ``|e_q|^2 <= Psi <= 2 |e_q|^2``, the two
facts the Lyapunov argument relies on.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from s2track.core.errors import AntipodalError
from s2track.core.states import BodyState, ReferenceState
from s2track.utils.rotations import E3, hat

# q·q_d at or below -1 + EPS_ANTIPODAL is treated as antipodal.
EPS_ANTIPODAL = 1e-9


@dataclass(frozen=True, eq=False)
class ErrorState:
    """
    Every error quantity at one instant.

    Args:
        psi: Attitude error function, in [0, 2)
        e_q: Configuration error vector (body frame)
        e_w: Angular-velocity error (rad/s, body frame)
        E: Matrix multiplying e_w in de_q/dt
        Xi: Matrix multiplying wd_b in de_q/dt
        cosine: q·q_d
    """

    psi: float
    e_q: np.ndarray
    e_w: np.ndarray
    E: np.ndarray
    Xi: np.ndarray
    cosine: float

    @property
    def psi_dot(self) -> float:
        return float(self.e_q @ self.e_w)

    @property
    def z_q(self) -> np.ndarray:
        """``[|e_q|, |e_w|]``."""
        return np.array([np.linalg.norm(self.e_q), np.linalg.norm(self.e_w)])


def _normalizer(q: np.ndarray, qd: np.ndarray) -> Tuple[float, float]:
    cosine = float(q @ qd)
    if cosine <= -1.0 + EPS_ANTIPODAL:
        raise AntipodalError(cosine)
    return cosine, np.sqrt(2.0 * (1.0 + cosine))


def pointing_direction(R: np.ndarray, r_body: np.ndarray = E3) -> np.ndarray:
    """
    World-frame pointing direction of a body with attitude ``R``.

    Args:
        R: Body-to-world rotation
        r_body: Pointing axis in body coordinates (default e3)

    Returns:
        Unit vector ``R r_body``
    """
    return R @ r_body


def attitude_error_psi(q: np.ndarray, qd: np.ndarray) -> float:
    """
    Attitude error function ``Psi = 2 - sqrt(2 (1 + q·q_d))``.

    Raises:
        AntipodalError: If ``q·q_d <= -1 + EPS_ANTIPODAL``
    """
    _, n = _normalizer(q, qd)
    return 2.0 - n


def config_error(Q: np.ndarray, Qd: np.ndarray, r_body: np.ndarray = E3) -> np.ndarray:
    """
    Configuration error vector ``e_q = Q^T (q_d x q) / sqrt(2 (1 + q·q_d))``.

    Its squared norm is ``(1 - q·q_d) / 2``.

    Raises:
        AntipodalError: If the pointing directions are antipodal
    """
    q = Q @ r_body
    qd = Qd @ r_body
    _, n = _normalizer(q, qd)
    return Q.T @ np.cross(qd, q) / n


def velocity_error(state: BodyState, ref: ReferenceState) -> np.ndarray:
    """Angular-velocity error ``e_w = w_b - Q^T Q_d wd_b``."""
    return state.w_b - state.Q.T @ (ref.Qd @ ref.wd_b)


def _kinematic_matrices(
    Q: np.ndarray,
    Qd: np.ndarray,
    q: np.ndarray,
    qd: np.ndarray,
    e_q: np.ndarray,
    cosine: float,
    n: float,
) -> Tuple[np.ndarray, np.ndarray]:
    n2 = n * n
    hat_q = hat(q)
    eq_qd = np.outer(e_q, qd)
    E = (eq_qd @ hat_q @ Q) / n2 + Q.T @ (cosine * np.eye(3) - np.outer(qd, q)) @ Q / n
    Xi = (eq_qd @ hat_q + np.outer(e_q, q) @ hat(qd)) @ Qd / n2
    return E, Xi


def error_kinematics(
    Q: np.ndarray, Qd: np.ndarray, r_body: np.ndarray = E3
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Matrices E and Xi of ``de_q/dt = E e_w + Xi wd_b``.

    Neither depends on the reference rate itself. ``Xi @ wd_b`` vanishes
    identically for this error vector; Xi is still returned so the bound terms
    that carry it can be evaluated as written.

    Raises:
        AntipodalError: If the pointing directions are antipodal
    """
    q = Q @ r_body
    qd = Qd @ r_body
    cosine, n = _normalizer(q, qd)
    e_q = Q.T @ np.cross(qd, q) / n
    return _kinematic_matrices(Q, Qd, q, qd, e_q, cosine, n)


def eq_dot(state: BodyState, ref: ReferenceState, r_body: np.ndarray = E3) -> np.ndarray:
    """Time derivative of the configuration error, ``E e_w + Xi wd_b``."""
    E, Xi = error_kinematics(state.Q, ref.Qd, r_body)
    return E @ velocity_error(state, ref) + Xi @ ref.wd_b


def feedforward_d(state: BodyState, ref: ReferenceState) -> np.ndarray:
    """Reference feedforward ``d = w_b x (Q^T Q_d wd_b) - Q^T Q_d wd_dot_b``."""
    R = state.Q.T @ ref.Qd
    return np.cross(state.w_b, R @ ref.wd_b) - R @ ref.wd_dot_b


def feedforward_d_alt(state: BodyState, ref: ReferenceState) -> np.ndarray:
    """Equivalent form ``d = -(Q^T Q_d wd_b) x e_w - Q^T Q_d wd_dot_b``."""
    R = state.Q.T @ ref.Qd
    return -np.cross(R @ ref.wd_b, velocity_error(state, ref)) - R @ ref.wd_dot_b


def tracking_errors(
    state: BodyState, ref: ReferenceState, r_body: np.ndarray = E3
) -> ErrorState:
    """
    Evaluate Psi, e_q, e_w, E and Xi in one pass.

    Raises:
        AntipodalError: If the pointing directions are antipodal
    """
    Q, Qd = state.Q, ref.Qd
    q = Q @ r_body
    qd = Qd @ r_body
    cosine, n = _normalizer(q, qd)
    e_q = Q.T @ np.cross(qd, q) / n
    E, Xi = _kinematic_matrices(Q, Qd, q, qd, e_q, cosine, n)
    return ErrorState(
        psi=2.0 - n,
        e_q=e_q,
        e_w=velocity_error(state, ref),
        E=E,
        Xi=Xi,
        cosine=cosine,
    )

"""
Perturbation bounds of the tracking closed loop.

Inertia-estimate error enters the Lyapunov derivative through

    A1 = dJ (e_q e_q^T + (Lambda + Psi) E)
    A2 = dJ (Q^T Q_d wd_b)^x
    B  = dJ ((Lambda + Psi) Xi wd_b - eta Q^T Q_d wd_dot_b) + eta (f - J^-1 J_hat f_hat)

with ``dJ = I - J^-1 J_hat``. The bounds are sups of their spectral norms over a
seeded low-discrepancy sample of the envelope, inflated by a safety factor.
Every term depends on the attitudes only through ``Q^T Q_d``, so samples fix
``Q = I`` and draw the relative rotation. The rate-dependent terms are taken
over the sign-flipped copies of each rate sample, which makes every bound
nondecreasing in each envelope field.
"""

import logging
import warnings
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg
from scipy.stats import qmc

from s2track.control.error_geometry import EPS_ANTIPODAL
from s2track.core.parameters import Gains, InertiaModel
from s2track.utils.rotations import E3, hat, unit

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 10_000
DEFAULT_SEED = 42
SAFETY_FACTOR = 1.1

_CHUNK = 2048
_DIMENSIONS = 12


@dataclass(frozen=True)
class Envelope:
    """
    Operating envelope the certificate covers.

    Args:
        wd_max: Sup of |wd_b| (rad/s)
        wd_dot_max: Sup of |wd_dot_b| (rad/s^2)
        w_max: Sup of |w_b| used when sampling the drift mismatch (rad/s)
        psi_max: Sup of the attitude error function, in (0, 2]
        f_max: Optional externally asserted bound on |f - J^-1 J_hat f_hat|;
            the larger of it and the sampled value is used
    """

    wd_max: float
    wd_dot_max: float
    w_max: float
    psi_max: float = 2.0
    f_max: Optional[float] = None

    def __post_init__(self):
        for name in ("wd_max", "wd_dot_max", "w_max"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value >= 0):
                raise ValueError(f"Envelope '{name}' must be finite and nonnegative, got {value!r}")
        if not (0.0 < self.psi_max <= 2.0):
            raise ValueError(f"Envelope 'psi_max' must lie in (0, 2], got {self.psi_max!r}")
        if self.f_max is not None and not (np.isfinite(self.f_max) and self.f_max >= 0):
            raise ValueError(f"Envelope 'f_max' must be finite and nonnegative, got {self.f_max!r}")

    @property
    def min_cosine(self) -> float:
        """Smallest q·q_d with Psi <= psi_max."""
        return 0.5 * (2.0 - self.psi_max) ** 2 - 1.0


@dataclass(frozen=True)
class BoundEstimates:
    """Sampled sups (already inflated by ``safety_factor``)."""

    A1_max: float
    A2_max: float
    B_max: float
    Upsilon_max: float
    A_breve_max: float
    f_max: float
    samples: int
    seed: int
    safety_factor: float

    @classmethod
    def zero(cls, samples: int = 0, seed: int = DEFAULT_SEED) -> "BoundEstimates":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, samples, seed, SAFETY_FACTOR)


def lambda_J(model: InertiaModel) -> float:
    """
    Smallest eigenvalue of ``J^-1 J_hat``.

    Solved as the generalized symmetric problem ``J_hat x = lambda J x``, whose
    eigenvalues are real because J is positive definite.
    """
    return float(scipy.linalg.eigh(model.J_hat, model.J, eigvals_only=True)[0])


def lambda_J_symmetric(model: InertiaModel) -> float:
    """Smallest eigenvalue of the symmetric part of ``J^-1 J_hat``."""
    M = np.linalg.solve(model.J, model.J_hat)
    return float(np.linalg.eigvalsh(0.5 * (M + M.T))[0])


def _ball(u: np.ndarray, radius: float) -> np.ndarray:
    """Map three uniforms per row onto the closed ball of the given radius."""
    z = 2.0 * u[:, 0] - 1.0
    phi = 2.0 * np.pi * u[:, 1]
    rho = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    direction = np.stack((rho * np.cos(phi), rho * np.sin(phi), z), axis=1)
    return radius * np.cbrt(u[:, 2])[:, None] * direction


def _rotations_about(axis: np.ndarray, angles: np.ndarray) -> np.ndarray:
    K = hat(axis)
    s = np.sin(angles)[:, None, None]
    c = np.cos(angles)[:, None, None]
    return np.eye(3) + s * K + (1.0 - c) * (K @ K)


def _hat_batch(v: np.ndarray) -> np.ndarray:
    out = np.zeros(v.shape[:-1] + (3, 3))
    out[..., 0, 1] = -v[..., 2]
    out[..., 0, 2] = v[..., 1]
    out[..., 1, 0] = v[..., 2]
    out[..., 1, 2] = -v[..., 0]
    out[..., 2, 0] = -v[..., 1]
    out[..., 2, 1] = v[..., 0]
    return out


def _spectral_norm(m: np.ndarray) -> np.ndarray:
    return np.linalg.norm(m, ord=2, axis=(-2, -1))


def _relative_rotations(u: np.ndarray, r_body: np.ndarray) -> np.ndarray:
    """
    Relative rotations ``Q^T Q_d`` with the pointing direction area-uniform on
    the whole sphere and a uniform spin about it.
    """
    p = np.cross(r_body, [1.0, 0.0, 0.0])
    if np.linalg.norm(p) < 1e-6:
        p = np.cross(r_body, [0.0, 1.0, 0.0])
    p = unit(p)
    theta = np.arccos(np.clip(1.0 - 2.0 * u[:, 0], -1.0, 1.0))
    return (
        _rotations_about(r_body, 2.0 * np.pi * u[:, 1])
        @ _rotations_about(p, theta)
        @ _rotations_about(r_body, 2.0 * np.pi * u[:, 2])
    )


def _sign_flipped_max(base: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise max of ``|base ± a ± b|`` over the four sign choices."""
    signs = (1.0, -1.0)
    norms = [np.linalg.norm(base + sa * a + sb * b, axis=1) for sa in signs for sb in signs]
    return np.max(norms, axis=0)


def _chunk_sups(
    u: np.ndarray,
    model: InertiaModel,
    gains: Gains,
    envelope: Envelope,
    r_body: np.ndarray,
) -> Tuple[np.ndarray, int]:
    """
    Per-chunk maxima of (|A1|, |A2|, |B|, Upsilon, A_breve, |f mismatch|) and
    the number of samples inside the envelope's cap.
    """
    Lam, eta = gains.Lambda, gains.eta
    dJ = model.delta_J
    J_inv = np.linalg.inv(model.J)

    R = _relative_rotations(u[:, 0:3], r_body)
    w = _ball(u[:, 3:6], envelope.w_max)
    wd = _ball(u[:, 6:9], envelope.wd_max)
    wd_dot = _ball(u[:, 9:12], envelope.wd_dot_max)

    q = r_body
    qd = R @ r_body
    cosine = qd @ q
    keep = (cosine >= envelope.min_cosine) & (cosine > -1.0 + EPS_ANTIPODAL)
    kept = int(keep.sum())
    if kept == 0:
        return np.zeros(6), 0
    R, w, wd, wd_dot, qd, cosine = (x[keep] for x in (R, w, wd, wd_dot, qd, cosine))
    n = np.sqrt(2.0 * (1.0 + cosine))
    psi = 2.0 - n
    L = (Lam + psi)[:, None, None]

    e_q = np.cross(qd, q) / n[:, None]
    eq_qd = e_q[:, :, None] * qd[:, None, :]
    eq_q = e_q[:, :, None] * q[None, None, :]
    n2 = (n * n)[:, None, None]
    E = eq_qd @ hat(q) / n2 + (
        cosine[:, None, None] * np.eye(3) - qd[:, :, None] * q[None, None, :]
    ) / n[:, None, None]
    Xi = (eq_qd @ hat(q) + eq_q @ _hat_batch(qd)) @ R / n2

    A1 = dJ @ (e_q[:, :, None] * e_q[:, None, :] + L * E)
    A2 = dJ @ _hat_batch(np.einsum("nij,nj->ni", R, wd))
    A_norm = np.maximum(_spectral_norm(A1 - eta * A2), _spectral_norm(A1 + eta * A2))

    Jw = np.einsum("ij,nj->ni", model.J - model.J_hat, w)
    gyroscopic = np.einsum("ij,nj->ni", J_inv, np.cross(Jw, w))
    torque_norm = float(np.linalg.norm(J_inv @ (model.tau - model.tau_hat)))
    mismatch_norm = np.linalg.norm(gyroscopic, axis=1) + torque_norm

    # -wd and -wd_dot lie in the same balls; the gyroscopic mismatch is even in w
    feedforward = np.einsum("ij,nj->ni", dJ, L[:, :, 0] * np.einsum("nij,nj->ni", Xi, wd))
    acceleration = eta * np.einsum("ij,nj->ni", dJ, np.einsum("nij,nj->ni", R, wd_dot))
    B_norm = _sign_flipped_max(eta * gyroscopic, feedforward, acceleration) + eta * torque_norm
    if envelope.f_max is not None:
        B_model_norm = _sign_flipped_max(np.zeros_like(feedforward), feedforward, acceleration)
        B_norm = np.maximum(B_norm, B_model_norm + eta * envelope.f_max)

    L1 = L[:, 0, 0]
    upsilon = L1 * B_norm
    a_breve = eta * B_norm + L1 * A_norm

    sups = np.array(
        [
            _spectral_norm(A1).max(),
            _spectral_norm(A2).max(),
            B_norm.max(),
            upsilon.max(),
            a_breve.max(),
            mismatch_norm.max(),
        ]
    )
    return sups, kept


def estimate_bounds(
    model: InertiaModel,
    gains: Gains,
    envelope: Envelope,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    safety_factor: float = SAFETY_FACTOR,
    r_body: np.ndarray = E3,
) -> BoundEstimates:
    """
    Estimate A1_max, A2_max, B_max, Upsilon_max and A_breve_max.

    The sample is a scrambled Halton sequence seeded with ``seed`` and reduced
    chunk by chunk in index order, so results do not depend on the machine.
    Pointing directions cover the whole sphere and those outside ``psi_max``
    are dropped; rates are fixed points of the unit ball scaled by the
    envelope radii and evaluated with both signs. Widening any envelope field
    therefore never lowers a bound for the same seed and sample count.

    Args:
        model: True inertia and estimate
        gains: Controller gains (Lambda and eta enter the bounds)
        envelope: Operating envelope
        samples: Number of sample points (use >= 1e4 for certification)
        seed: Sequence seed
        safety_factor: Inflation applied to every sup
        r_body: Body pointing axis

    Returns:
        BoundEstimates

    Raises:
        ValueError: If samples < 1 or no sample lies inside ``psi_max``
    """
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    if envelope.psi_max >= 2.0 and not np.array_equal(model.J, model.J_hat):
        warnings.warn(
            "psi_max = 2 admits near-antipodal pointing errors; "
            "A1_max is dominated by them whenever J_hat != J"
        )

    r_body = unit(r_body)
    sampler = qmc.Halton(d=_DIMENSIONS, scramble=True, seed=seed)
    u = sampler.random(samples)

    sups = np.zeros(6)
    kept = 0
    for start in range(0, samples, _CHUNK):
        chunk, chunk_kept = _chunk_sups(u[start:start + _CHUNK], model, gains, envelope, r_body)
        sups = np.maximum(sups, chunk)
        kept += chunk_kept
    if kept == 0:
        raise ValueError(
            f"no sample falls inside psi_max = {envelope.psi_max:g}; increase samples"
        )
    if kept < samples // 10 and not model.perfect_knowledge:
        warnings.warn(
            f"only {kept} of {samples} samples lie inside psi_max = {envelope.psi_max:g}; "
            "the bounds may be loose from below"
        )

    A1, A2, B, ups, a_breve, f_mis = (float(x) * safety_factor for x in sups)
    if envelope.f_max is not None:
        f_mis = max(f_mis, float(envelope.f_max))
    logger.debug(
        "Bounds from %d samples (seed %d): A1=%.6g A2=%.6g B=%.6g Upsilon=%.6g A_breve=%.6g",
        samples, seed, A1, A2, B, ups, a_breve,
    )
    return BoundEstimates(
        A1_max=A1,
        A2_max=A2,
        B_max=B,
        Upsilon_max=ups,
        A_breve_max=a_breve,
        f_max=f_mis,
        samples=samples,
        seed=seed,
        safety_factor=safety_factor,
    )

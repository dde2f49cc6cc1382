"""
Runtime evaluation of the Lyapunov candidate along trajectories.

    V = 1/2 s^T s + kappa Psi

Nothing here re-derives the analytic dV/dt; the monitors check the
inequalities the stability argument claims (the W1/W2 sandwich, the decay
envelope and the decrease estimate outside the ultimate set) against
sampled data.
"""

import logging
from dataclasses import dataclass, replace
from typing import List, Sequence, Tuple

import numpy as np

from s2track.certification.conditions import w_matrices
from s2track.control.error_geometry import ErrorState
from s2track.control.law import sliding_surface
from s2track.core.errors import TooFewSamplesError
from s2track.core.parameters import Gains

logger = logging.getLogger(__name__)

SANDWICH_ATOL = 1e-9
SANDWICH_RTOL = 1e-9
DECREASE_TOL = 1e-4


@dataclass(frozen=True)
class LyapunovSample:
    """
    Lyapunov quantities at one record.

    ``Vdot_fd`` is NaN until :func:`vdot_finite_difference` fills it in.
    """

    t: float
    V: float
    z_q_norm: float
    e_q_norm: float
    e_w_norm: float
    s_norm: float
    psi: float
    sandwich_lo: float
    sandwich_hi: float
    Vdot_fd: float = float("nan")


def lyapunov_value(s: np.ndarray, psi: float, kappa: float) -> float:
    """
    Lyapunov candidate ``V = 1/2 s^T s + kappa Psi``.

    Args:
        s: Sliding-surface value
        psi: Attitude error function, in [0, 2]
        kappa: Nonnegative weight of Psi

    Returns:
        V
    """
    s = np.asarray(s, dtype=float)
    return float(0.5 * (s @ s) + kappa * psi)


def _quadratic(W: np.ndarray, z: np.ndarray) -> float:
    return float(z @ W @ z)


def sandwich_check(
    err: ErrorState, gains: Gains, lambda_J: float
) -> Tuple[float, float, float, bool]:
    """
    Evaluate ``z_q^T W1 z_q <= V <= z_q^T W2 z_q`` at the instantaneous Psi.

    A violation is reported through ``ok``, never raised.

    Args:
        err: Tracking errors
        gains: Controller gains
        lambda_J: lambda_J used for kappa

    Returns:
        ``(lo, V, hi, ok)``
    """
    s = sliding_surface(err.psi, err.e_q, err.e_w, gains)
    V = lyapunov_value(s, err.psi, gains.kappa(lambda_J))
    W = w_matrices(gains, lambda_J, err.psi)
    z = err.z_q
    lo = _quadratic(W["W1"], z)
    hi = _quadratic(W["W2"], z)
    tol = SANDWICH_ATOL + SANDWICH_RTOL * abs(V)
    ok = lo <= V + tol and V <= hi + tol
    return lo, V, hi, bool(ok)


def lyapunov_sample(t: float, err: ErrorState, gains: Gains, lambda_J: float) -> LyapunovSample:
    """Build the monitor record for one instant."""
    lo, V, hi, _ = sandwich_check(err, gains, lambda_J)
    s = sliding_surface(err.psi, err.e_q, err.e_w, gains)
    z = err.z_q
    return LyapunovSample(
        t=float(t),
        V=V,
        z_q_norm=float(np.linalg.norm(z)),
        e_q_norm=float(z[0]),
        e_w_norm=float(z[1]),
        s_norm=float(np.linalg.norm(s)),
        psi=float(err.psi),
        sandwich_lo=lo,
        sandwich_hi=hi,
    )


def decay_envelope(V0: float, decay_rate: float, t):
    """``V0 exp(-decay_rate t)``; ``t`` may be a scalar or an array."""
    return V0 * np.exp(-decay_rate * np.asarray(t, dtype=float))


def finite_difference_rate(values: np.ndarray, dt: float) -> np.ndarray:
    """
    Time derivative of uniformly sampled values.

    Second-order central differences in the interior and second-order
    one-sided differences at both ends. Differentiates along the first axis.

    Raises:
        TooFewSamplesError: If fewer than three samples are given
    """
    values = np.asarray(values, dtype=float)
    if values.shape[0] < 3:
        raise TooFewSamplesError(
            f"Need at least 3 samples for a second-order stencil, got {values.shape[0]}"
        )
    return np.gradient(values, dt, axis=0, edge_order=2)


def vdot_finite_difference(trace: Sequence[LyapunovSample]) -> List[LyapunovSample]:
    """
    Attach the finite-difference dV/dt to every sample of a trace.

    Args:
        trace: Samples on a uniform time grid

    Returns:
        New samples with ``Vdot_fd`` set

    Raises:
        TooFewSamplesError: If the trace has fewer than three samples
        ValueError: If the time grid is not uniform
    """
    if len(trace) < 3:
        raise TooFewSamplesError(
            f"Need at least 3 samples for a second-order stencil, got {len(trace)}"
        )
    t = np.array([sample.t for sample in trace])
    steps = np.diff(t)
    dt = float(steps.mean())
    if not (dt > 0 and np.allclose(steps, dt, rtol=1e-9, atol=0.0)):
        raise ValueError("Samples must lie on a uniform, strictly increasing time grid")
    rates = finite_difference_rate(np.array([sample.V for sample in trace]), dt)
    return [replace(sample, Vdot_fd=float(rate)) for sample, rate in zip(trace, rates)]


def sliding_rate(s: np.ndarray, dt: float) -> np.ndarray:
    """``s^T ds/dt`` at every sample of a uniformly sampled surface trace (rows)."""
    s = np.asarray(s, dtype=float)
    return np.einsum("ij,ij->i", s, finite_difference_rate(s, dt))


def decrease_violations(
    trace: Sequence[LyapunovSample],
    lam_min_W4: float,
    z_q_threshold: float,
    e_w_threshold: float,
    tol: float = DECREASE_TOL,
) -> int:
    """
    Count samples outside the ultimate set whose V does not decrease fast enough.

    A sample is outside when ``|z_q|`` exceeds ``z_q_threshold`` and ``|e_w|``
    exceeds ``e_w_threshold``; it violates the estimate when
    ``Vdot_fd > -lambda_min(W4) |z_q|^2 + tol (1 + V)``.
    """
    count = 0
    for sample in trace:
        if not (sample.z_q_norm > z_q_threshold and sample.e_w_norm > e_w_threshold):
            continue
        bound = -lam_min_W4 * sample.z_q_norm**2 + tol * (1.0 + sample.V)
        if sample.Vdot_fd > bound:
            count += 1
    if count:
        logger.debug("%d samples outside the ultimate set violate the decrease estimate", count)
    return count

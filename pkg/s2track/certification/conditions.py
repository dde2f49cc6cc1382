"""Gain conditions, the W matrices, thresholds and the envelope radius."""

import math
from dataclasses import dataclass
from typing import Dict

import numpy as np

from s2track.certification.bounds import BoundEstimates
from s2track.core.errors import InvalidGainStructureError, NotCertifiableError
from s2track.core.parameters import Gains

PSI_GRID = 64


@dataclass(frozen=True)
class Condition:
    """
    One inequality of the certificate.

    ``margin`` is positive exactly when the inequality holds with room to
    spare, i.e. rhs - lhs for "lhs < rhs" and lhs - rhs for "lhs > rhs".
    """

    name: str
    lhs: float
    rhs: float
    margin: float
    passed: bool


@dataclass(frozen=True)
class Thresholds:
    """Quantities derived from the W-matrix eigenvalues and the bounds."""

    e_w_threshold: float
    z_q_threshold: float
    radius: float
    decay_rate: float
    denominator: float
    lam_min_W3: float
    lam_min_W4: float
    lam_min_W5: float
    lam_max_W2: float


def _less(name: str, lhs: float, rhs: float) -> Condition:
    margin = rhs - lhs
    return Condition(name, float(lhs), float(rhs), float(margin), bool(lhs < rhs))


def _greater(name: str, lhs: float, rhs: float) -> Condition:
    margin = lhs - rhs
    return Condition(name, float(lhs), float(rhs), float(margin), bool(lhs > rhs))


def velocity_denominator(gains: Gains, lambda_J: float, bounds: BoundEstimates) -> float:
    """``(gamma5 lambda_J - A2_max) eta^2 - eta A1_max``."""
    eta = gains.eta
    return (gains.gamma5 * lambda_J - bounds.A2_max) * eta * eta - eta * bounds.A1_max


def validate_gains(
    gains: Gains,
    lambda_J: float,
    bounds: BoundEstimates,
    psi_max: float = 2.0,
) -> Dict[str, Condition]:
    """
    Check the gain conditions.

    * ``1e``: gamma = gamma1 + gamma2 + gamma3 and gamma3 = gamma4 + gamma5
    * ``1f``: gamma3 < gamma4 (Lambda + Psi)^2 / Psi^2, enforced at Psi = psi_max
      where the right-hand side is smallest
    * ``1g``: gamma5 > A2_max / lambda_J
    * ``1h``: eta > A1_max / (gamma5 lambda_J - A2_max)

    Returns:
        Mapping from condition name to Condition

    Raises:
        InvalidGainStructureError: If the gamma split does not add up
    """
    split_error = abs(gains.gamma - (gains.gamma1 + gains.gamma2 + gains.gamma3)) + abs(
        gains.gamma3 - (gains.gamma4 + gains.gamma5)
    )
    if split_error != 0.0:
        raise InvalidGainStructureError(f"Gain split does not add up (residual {split_error:.3e})")

    checks = {"1e": Condition("1e", gains.gamma, gains.gamma, 0.0, True)}

    rhs_f = gains.gamma4 * (gains.Lambda + psi_max) ** 2 / psi_max**2
    checks["1f"] = _less("1f", gains.gamma3, rhs_f)

    rhs_g = bounds.A2_max / lambda_J if lambda_J > 0 else math.inf
    checks["1g"] = _greater("1g", gains.gamma5, rhs_g)

    slack = gains.gamma5 * lambda_J - bounds.A2_max
    rhs_h = bounds.A1_max / slack if slack > 0 else math.inf
    checks["1h"] = _greater("1h", gains.eta, rhs_h)
    return checks


def w_matrices(gains: Gains, lambda_J: float, psi: float) -> Dict[str, np.ndarray]:
    """
    The five 2x2 matrices of the Lyapunov argument at attitude error ``psi``.

    W1 and W2 sandwich V between quadratic forms in ``z_q = [|e_q|, |e_w|]``;
    W3 and W4 appear in the decrease estimate under model error; W5 in the
    decrease estimate under perfect knowledge.
    """
    eta = gains.eta
    L = gains.Lambda + psi
    kappa = gains.kappa(lambda_J)
    g23 = gains.gamma2 + gains.gamma3
    g3 = gains.gamma3
    core = np.array([[L * L, -psi * eta], [-psi * eta, eta * eta]])
    return {
        "W1": np.array([[L * L / 2 + kappa, -L * eta / 2], [-L * eta / 2, eta * eta / 2]]),
        "W2": np.array([[L * L / 2 + 2 * kappa, L * eta / 2], [L * eta / 2, eta * eta / 2]]),
        "W3": gains.gamma2 * lambda_J * core,
        "W4": lambda_J
        * np.array([[g3 * L * L, -g3 * psi * eta], [-g3 * psi * eta, gains.gamma4 * eta * eta]]),
        "W5": g23 * core,
    }


def psi_grid(psi_max: float = 2.0, points: int = PSI_GRID) -> np.ndarray:
    return np.linspace(0.0, psi_max, points)


def w_eigen_extremes(
    gains: Gains,
    lambda_J: float,
    psi_max: float = 2.0,
    points: int = PSI_GRID,
) -> Dict[str, Dict[str, float]]:
    """
    Worst-case eigenvalues of W1..W5 over a uniform Psi grid on [0, psi_max].

    Returns:
        ``{"W1": {"min": min over grid of lambda_min, "max": max over grid of lambda_max}, ...}``
    """
    stacks: Dict[str, list] = {name: [] for name in ("W1", "W2", "W3", "W4", "W5")}
    for psi in psi_grid(psi_max, points):
        for name, W in w_matrices(gains, lambda_J, float(psi)).items():
            stacks[name].append(W)
    extremes = {}
    for name, mats in stacks.items():
        eigs = np.linalg.eigvalsh(np.array(mats))
        extremes[name] = {"min": float(eigs[:, 0].min()), "max": float(eigs[:, -1].max())}
    return extremes


def compute_thresholds(
    gains: Gains,
    lambda_J: float,
    bounds: BoundEstimates,
    psi_max: float,
    points: int,
    strict: bool,
) -> Thresholds:
    eig = w_eigen_extremes(gains, lambda_J, psi_max, points)
    lam_w3 = eig["W3"]["min"]
    denom = velocity_denominator(gains, lambda_J, bounds)

    if denom > 0:
        e_w_threshold = bounds.A_breve_max / denom
    elif strict:
        raise NotCertifiableError(
            f"(gamma5 lambda_J - A2_max) eta^2 - eta A1_max = {denom:.6g} is not positive"
        )
    else:
        e_w_threshold = math.inf

    if lam_w3 > 0:
        radius = math.sqrt(bounds.Upsilon_max / lam_w3)
    elif strict:
        raise NotCertifiableError(f"lambda_min(W3) = {lam_w3:.6g} is not positive")
    else:
        radius = math.inf

    return Thresholds(
        e_w_threshold=e_w_threshold,
        z_q_threshold=radius,
        radius=radius,
        decay_rate=eig["W5"]["min"] / eig["W2"]["max"],
        denominator=denom,
        lam_min_W3=lam_w3,
        lam_min_W4=eig["W4"]["min"],
        lam_min_W5=eig["W5"]["min"],
        lam_max_W2=eig["W2"]["max"],
    )


def thresholds_and_radius(
    gains: Gains,
    lambda_J: float,
    bounds: BoundEstimates,
    psi_max: float = 2.0,
    points: int = PSI_GRID,
) -> Thresholds:
    """
    Velocity-error threshold, z_q threshold, envelope radius and decay rate.

    * e_w threshold: ``A_breve_max / ((gamma5 lambda_J - A2_max) eta^2 - eta A1_max)``
    * radius (= z_q threshold): ``sqrt(Upsilon_max / lambda_min(W3))``
    * decay rate: ``lambda_min(W5) / lambda_max(W2)``

    Eigenvalues are taken at their worst case over the Psi grid.

    Raises:
        NotCertifiableError: If the denominator or lambda_min(W3) is not positive
    """
    return compute_thresholds(gains, lambda_J, bounds, psi_max, points, strict=True)


def check_set_containment(
    gains: Gains,
    lambda_J: float,
    bounds: BoundEstimates,
    thresholds: Thresholds,
) -> Dict[str, Condition]:
    """
    Conditions under which the ultimate set lies inside the region where
    ``|e_q| < 1``:

    * ``8a``: Upsilon_max < lambda_min(W3)
    * ``8b``: A_breve_max < ((gamma5 lambda_J - A2_max) eta^2 - eta A1_max) radius

    With zero perturbation both sides of ``8b`` vanish along with both
    thresholds; that case passes.
    """
    checks = {"8a": _less("8a", bounds.Upsilon_max, thresholds.lam_min_W3)}

    rhs_b = thresholds.denominator * thresholds.radius if thresholds.denominator > 0 else -math.inf
    cond_b = _less("8b", bounds.A_breve_max, rhs_b)
    if bounds.A_breve_max == 0.0 and rhs_b == 0.0:
        cond_b = Condition("8b", 0.0, 0.0, 0.0, True)
    checks["8b"] = cond_b
    return checks

"""Certification report: everything the stability argument needs in one document."""

import json
import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from s2track.certification.bounds import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    SAFETY_FACTOR,
    BoundEstimates,
    Envelope,
    estimate_bounds,
    lambda_J,
    lambda_J_symmetric,
)
from s2track.certification.conditions import (
    PSI_GRID,
    Condition,
    compute_thresholds,
    check_set_containment,
    validate_gains,
    w_eigen_extremes,
)
from s2track.core.parameters import Gains, InertiaModel
from s2track.utils.rotations import E3
from s2track.utils.serialization import dumps, restore_non_finite

logger = logging.getLogger(__name__)


@dataclass
class CertificationReport:
    """
    Outcome of certifying a gain set against a model and envelope.

    ``lambda_J_effective`` is ``min(lambda_J, lambda_J_sym)``; it is the value
    used in every condition, threshold and W matrix.
    """

    lambda_J: float
    lambda_J_sym: float
    lambda_J_effective: float
    bounds: BoundEstimates
    gain_checks: Dict[str, Condition]
    W_eigs: Dict[str, Dict[str, float]]
    radius: float
    z_q_threshold: float
    e_w_threshold: float
    decay_rate: float
    lam_min_W3: float
    lam_min_W4: float
    lam_min_W5: float
    lam_max_W2: float
    set_conditions: Dict[str, Condition]
    psi_max: float
    psi_grid: int
    certified: bool = field(init=False)

    def __post_init__(self):
        self.certified = all(c.passed for c in self.gain_checks.values()) and all(
            c.passed for c in self.set_conditions.values()
        )

    @property
    def failures(self) -> List[str]:
        """Names of the failing conditions, in report order."""
        return [
            name
            for name, c in list(self.gain_checks.items()) + list(self.set_conditions.items())
            if not c.passed
        ]

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, indent: int = 2) -> str:
        return dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict) -> "CertificationReport":
        data = restore_non_finite(dict(data))
        data.pop("certified", None)
        data["bounds"] = BoundEstimates(**data["bounds"])
        data["gain_checks"] = {k: Condition(**v) for k, v in data["gain_checks"].items()}
        data["set_conditions"] = {k: Condition(**v) for k, v in data["set_conditions"].items()}
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "CertificationReport":
        return cls.from_dict(json.loads(text))

    def summary_lines(self) -> List[str]:
        """Human-readable summary, one line per item."""
        mark = "✓" if self.certified else "✗"
        lines = [
            f"{mark} certified: {self.certified}",
            f"  lambda_J = {self.lambda_J:.6g} (symmetric part {self.lambda_J_sym:.6g})",
            f"  A1_max = {self.bounds.A1_max:.6g}, A2_max = {self.bounds.A2_max:.6g}, "
            f"B_max = {self.bounds.B_max:.6g}",
            f"  Upsilon_max = {self.bounds.Upsilon_max:.6g}, "
            f"A_breve_max = {self.bounds.A_breve_max:.6g}",
        ]
        for c in list(self.gain_checks.values()) + list(self.set_conditions.values()):
            status = "pass" if c.passed else "FAIL"
            lines.append(
                f"  ({c.name}) {status}: lhs = {c.lhs:.6g}, rhs = {c.rhs:.6g}, "
                f"margin = {c.margin:.6g}"
            )
        lines += [
            f"  envelope radius = {self.radius:.6g}",
            f"  e_w threshold = {self.e_w_threshold:.6g}",
            f"  decay rate (perfect knowledge) = {self.decay_rate:.6g} 1/s",
            f"  samples = {self.bounds.samples}, seed = {self.bounds.seed}, "
            f"safety factor = {self.bounds.safety_factor}",
        ]
        return lines


def certify_with_bounds(
    gains: Gains,
    lam_J: float,
    lam_J_sym: float,
    bounds: BoundEstimates,
    psi_max: float = 2.0,
    psi_points: int = PSI_GRID,
) -> CertificationReport:
    """Assemble a report from precomputed lambda_J values and bounds."""
    lam = min(lam_J, lam_J_sym)
    gain_checks = validate_gains(gains, lam, bounds, psi_max)
    thresholds = compute_thresholds(gains, lam, bounds, psi_max, psi_points, strict=False)
    set_conditions = check_set_containment(gains, lam, bounds, thresholds)
    return CertificationReport(
        lambda_J=lam_J,
        lambda_J_sym=lam_J_sym,
        lambda_J_effective=lam,
        bounds=bounds,
        gain_checks=gain_checks,
        W_eigs=w_eigen_extremes(gains, lam, psi_max, psi_points),
        radius=thresholds.radius,
        z_q_threshold=thresholds.z_q_threshold,
        e_w_threshold=thresholds.e_w_threshold,
        decay_rate=thresholds.decay_rate,
        lam_min_W3=thresholds.lam_min_W3,
        lam_min_W4=thresholds.lam_min_W4,
        lam_min_W5=thresholds.lam_min_W5,
        lam_max_W2=thresholds.lam_max_W2,
        set_conditions=set_conditions,
        psi_max=psi_max,
        psi_grid=psi_points,
    )


def certify(
    model: InertiaModel,
    gains: Gains,
    envelope: Envelope,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    safety_factor: float = SAFETY_FACTOR,
    psi_points: int = PSI_GRID,
    r_body: np.ndarray = E3,
) -> CertificationReport:
    """
    Certify ``gains`` for ``model`` over ``envelope``.

    Never raises for a failing condition; failures are recorded in the report
    and ``certified`` is False.
    """
    lam_J = lambda_J(model)
    lam_J_sym = lambda_J_symmetric(model)
    if lam_J_sym < lam_J:
        logger.info(
            "J^-1 J_hat is not symmetric; using lambda_min of its symmetric part "
            "(%.6g < %.6g)", lam_J_sym, lam_J,
        )
    bounds = estimate_bounds(model, gains, envelope, samples, seed, safety_factor, r_body)
    report = certify_with_bounds(gains, lam_J, lam_J_sym, bounds, envelope.psi_max, psi_points)
    logger.info(
        "Certification %s (radius %.6g, decay rate %.6g)",
        "passed" if report.certified else f"failed: {', '.join(report.failures)}",
        report.radius,
        report.decay_rate,
    )
    return report


def radius_versus_gain_scale(
    model: InertiaModel,
    gains: Gains,
    envelope: Envelope,
    scales: Sequence[float],
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    safety_factor: float = SAFETY_FACTOR,
    psi_points: int = PSI_GRID,
    r_body: np.ndarray = E3,
) -> List[Tuple[float, float, bool]]:
    """
    Envelope radius with every gamma_i multiplied by each factor in ``scales``.

    The bounds do not depend on the gammas, so they are estimated once.

    Returns:
        List of ``(scale, radius, certified)``
    """
    lam_J = lambda_J(model)
    lam_J_sym = lambda_J_symmetric(model)
    bounds = estimate_bounds(model, gains, envelope, samples, seed, safety_factor, r_body)
    rows = []
    for scale in scales:
        report = certify_with_bounds(
            gains.scaled(scale), lam_J, lam_J_sym, bounds, envelope.psi_max, psi_points
        )
        rows.append((float(scale), report.radius, report.certified))
    return rows

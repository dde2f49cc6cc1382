"""Closed-loop scenario runs: integration, monitors and the run summary."""

import logging
import warnings
from dataclasses import asdict, dataclass
from typing import TYPE_CHECKING, List, Optional

import numpy as np
import pandas as pd

from s2track.certification.report import CertificationReport, certify
from s2track.control.law import AttitudeController, ControlOutput
from s2track.core.errors import (
    AntipodalError,
    DegenerateMatrixError,
    EnvelopeViolationError,
    NotCertifiableError,
    ScenarioAborted,
)
from s2track.core.states import BodyState, ReferenceState
from s2track.monitor.lyapunov import (
    SANDWICH_ATOL,
    SANDWICH_RTOL,
    LyapunovSample,
    decay_envelope,
    decrease_violations,
    finite_difference_rate,
    lyapunov_sample,
)
from s2track.sim.dynamics import PlantParams, rk4_step
from s2track.sim.reference import ReferenceProfile, reference_step
from s2track.utils.rotations import exp_rodrigues, unit
from s2track.utils.serialization import dumps

if TYPE_CHECKING:
    from s2track.data.config import ScenarioConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ABORTED = 3

SETTLING_FRACTION = 0.2
DECAY_RTOL = 1e-3
DECAY_ATOL = 1e-12


def _indexed(name: str, size: int) -> List[str]:
    return [f"{name}[{i}]" for i in range(size)]


COLUMNS = (
    ["t"]
    + _indexed("Q", 9)
    + _indexed("w_b", 3)
    + _indexed("Qd", 9)
    + _indexed("wd_b", 3)
    + _indexed("u", 3)
    + ["psi"]
    + _indexed("e_q", 3)
    + _indexed("e_w", 3)
    + _indexed("s", 3)
    + ["V", "sandwich_lo", "sandwich_hi", "Vdot_fd"]
)


@dataclass(frozen=True)
class RunSummary:
    """
    Outcome of one scenario.

    ``fitted_rate`` is only set for perfect-knowledge runs. ``envelope_violations``
    counts samples above the decay envelope (perfect knowledge) or settled
    samples with ``|z_q|`` above the certified radius (model error).
    """

    name: str
    certified: bool
    radius: float
    decay_rate: float
    fitted_rate: Optional[float]
    max_zq_settled: Optional[float]
    envelope_violations: int
    sandwich_failures: int
    decrease_violations: int
    exit_status: int
    steps: int
    abort_reason: Optional[str] = None
    abort_time: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, indent: int = 2) -> str:
        return dumps(self.to_dict(), indent=indent)


@dataclass(frozen=True, eq=False)
class ScenarioResult:
    name: str
    trajectory: pd.DataFrame
    summary: RunSummary
    report: CertificationReport


def _record(
    t: float,
    state: BodyState,
    ref: ReferenceState,
    out: ControlOutput,
    controller: AttitudeController,
    lambda_J: float,
) -> np.ndarray:
    err = out.errors
    sample = lyapunov_sample(t, err, controller.gains, lambda_J)
    return np.concatenate(
        (
            [t],
            np.ravel(state.Q),
            state.w_b,
            np.ravel(ref.Qd),
            ref.wd_b,
            out.u,
            [err.psi],
            err.e_q,
            err.e_w,
            out.s,
            [sample.V, sample.sandwich_lo, sample.sandwich_hi, np.nan],
        )
    )


def _frame(rows: np.ndarray, dt: float) -> pd.DataFrame:
    frame = pd.DataFrame(rows, columns=COLUMNS)
    if len(frame) >= 3:
        frame["Vdot_fd"] = finite_difference_rate(frame["V"].to_numpy(), dt)
    return frame


def simulate(
    params: PlantParams,
    controller: AttitudeController,
    profile: ReferenceProfile,
    initial: BodyState,
    dt: float,
    duration: float,
    lambda_J: float = 1.0,
    zero_order_hold: bool = True,
) -> pd.DataFrame:
    """
    Integrate the closed loop and record every step.

    Args:
        params: True plant (the controller never sees it)
        controller: Controller bound to the inertia estimate
        profile: Reference profile
        initial: State at t = 0
        dt: Step size (s)
        duration: Run length (s); rounded to a whole number of steps
        lambda_J: lambda_J used for the Lyapunov weight kappa
        zero_order_hold: Hold u over each step; otherwise re-evaluate the
            control law at every Runge-Kutta stage against the closed-form reference

    Returns:
        DataFrame with one row per record (``COLUMNS``)

    Raises:
        ScenarioAborted: On an antipodal pointing error or a non-finite state
    """
    steps = int(round(duration / dt))
    if steps < 1:
        raise ValueError(f"Duration {duration!r} s is shorter than one step of {dt!r} s")

    rows = np.full((steps + 1, len(COLUMNS)), np.nan)
    state = initial
    ref = profile.state_at(0.0)

    def staged(t_stage: float, stage_state: BodyState) -> np.ndarray:
        return controller(stage_state, profile.state_at(t_stage)).u

    def abort(reason: str, message: str, k: int, last_state: BodyState):
        frame = _frame(rows[:k], dt)
        time = (k - 1) * dt if k > 0 else 0.0
        logger.info("Aborting at record %d: %s", k, message)
        raise ScenarioAborted(reason, message, time, last_state, frame)

    last_good = initial
    for k in range(steps + 1):
        t = k * dt
        try:
            out = controller(state, ref)
        except AntipodalError as exc:
            abort("antipodal", str(exc), k, last_good)
        row = _record(t, state, ref, out, controller, lambda_J)
        if not np.all(np.isfinite(row[:-1])):
            abort("non_finite", "record contains non-finite values", k, last_good)
        rows[k] = row
        last_good = state
        if k == steps:
            break

        control = out.u if zero_order_hold else staged
        try:
            stepped = rk4_step(state, params, dt, control, t)
        except AntipodalError as exc:
            abort("antipodal", str(exc), k + 1, last_good)
        except DegenerateMatrixError as exc:
            abort("non_finite", str(exc), k + 1, last_good)
        if not stepped.is_finite():
            abort("non_finite", "state left the double range", k + 1, last_good)
        state = stepped
        ref = reference_step(profile, ref, t, dt)

    return _frame(rows, dt)


def initial_state(config: "ScenarioConfig") -> BodyState:
    """Initial attitude as an (axis, angle) perturbation of the reference at t = 0."""
    Qd0 = config.reference.state_at(0.0).Qd
    perturbation = exp_rodrigues(unit(config.initial.axis), config.initial.angle)
    return BodyState(Q=Qd0 @ perturbation, w_b=np.array(config.initial.w_b, dtype=float))


def check_envelope(config: "ScenarioConfig") -> None:
    """
    Check that the scenario lies inside the envelope it is certified for.

    Raises:
        EnvelopeViolationError: If the reference rate or acceleration, the
            initial attitude error or the initial rate exceed the envelope
    """
    env = config.envelope
    slack = 1.0 + 1e-12
    profile = config.reference
    if profile.peak_rate > env.wd_max * slack:
        raise EnvelopeViolationError(
            f"Reference peak rate {profile.peak_rate:.6g} rad/s exceeds wd_max = {env.wd_max:.6g}"
        )
    if profile.peak_acceleration > env.wd_dot_max * slack:
        raise EnvelopeViolationError(
            f"Reference peak acceleration {profile.peak_acceleration:.6g} rad/s^2 "
            f"exceeds wd_dot_max = {env.wd_dot_max:.6g}"
        )

    state = initial_state(config)
    r = config.r_body
    cosine = float((state.Q @ r) @ (profile.state_at(0.0).Qd @ r))
    psi0 = 2.0 - np.sqrt(max(2.0 * (1.0 + cosine), 0.0))
    if psi0 > env.psi_max * slack:
        raise EnvelopeViolationError(
            f"Initial attitude error Psi = {psi0:.6g} exceeds psi_max = {env.psi_max:.6g}"
        )
    w0 = float(np.linalg.norm(state.w_b))
    if w0 > env.w_max * slack:
        raise EnvelopeViolationError(
            f"Initial rate |w_b| = {w0:.6g} rad/s exceeds w_max = {env.w_max:.6g}"
        )


def _fitted_rate(t: np.ndarray, V: np.ndarray) -> Optional[float]:
    mask = np.isfinite(V) & (V > 0)
    if mask.sum() < 2:
        return None
    slope = np.polyfit(t[mask], np.log(V[mask]), 1)[0]
    return float(-slope)


def _z_q_norm(trajectory: pd.DataFrame) -> np.ndarray:
    e_q = trajectory[_indexed("e_q", 3)].to_numpy()
    e_w = trajectory[_indexed("e_w", 3)].to_numpy()
    return np.sqrt(np.sum(e_q * e_q, axis=1) + np.sum(e_w * e_w, axis=1))


def summarize(
    name: str,
    trajectory: pd.DataFrame,
    report: CertificationReport,
    perfect_knowledge: bool,
) -> RunSummary:
    """
    Reduce a trajectory to its run summary.

    The settling window is the last ``SETTLING_FRACTION`` of the run.
    """
    t = trajectory["t"].to_numpy()
    V = trajectory["V"].to_numpy()
    zq = _z_q_norm(trajectory)
    settled = t >= t[-1] - SETTLING_FRACTION * (t[-1] - t[0])

    if perfect_knowledge:
        envelope = decay_envelope(V[0], report.decay_rate, t - t[0])
        violations = int(np.sum(V > envelope * (1.0 + DECAY_RTOL) + DECAY_ATOL))
    else:
        violations = int(np.sum(zq[settled] > report.radius))

    lo = trajectory["sandwich_lo"].to_numpy()
    hi = trajectory["sandwich_hi"].to_numpy()
    tol = SANDWICH_ATOL + SANDWICH_RTOL * np.abs(V)
    sandwich_failures = int(np.sum((lo > V + tol) | (V > hi + tol)))

    decrease = 0
    if len(trajectory) >= 3:
        e_w = trajectory[_indexed("e_w", 3)].to_numpy()
        e_q = trajectory[_indexed("e_q", 3)].to_numpy()
        psi = trajectory["psi"].to_numpy()
        vdot = trajectory["Vdot_fd"].to_numpy()
        samples = [
            LyapunovSample(
                t=float(t[i]),
                V=float(V[i]),
                z_q_norm=float(zq[i]),
                e_q_norm=float(np.linalg.norm(e_q[i])),
                e_w_norm=float(np.linalg.norm(e_w[i])),
                s_norm=float("nan"),
                psi=float(psi[i]),
                sandwich_lo=float(lo[i]),
                sandwich_hi=float(hi[i]),
                Vdot_fd=float(vdot[i]),
            )
            for i in range(len(trajectory))
        ]
        decrease = decrease_violations(
            samples, report.lam_min_W4, report.z_q_threshold, report.e_w_threshold
        )

    return RunSummary(
        name=name,
        certified=report.certified,
        radius=report.radius,
        decay_rate=report.decay_rate,
        fitted_rate=_fitted_rate(t, V) if perfect_knowledge else None,
        max_zq_settled=float(zq[settled].max()),
        envelope_violations=violations,
        sandwich_failures=sandwich_failures,
        decrease_violations=decrease,
        exit_status=EXIT_OK,
        steps=len(trajectory) - 1,
    )


def aborted_summary(name: str, report: CertificationReport, exc: ScenarioAborted) -> RunSummary:
    """Summary row for a run that stopped early."""
    partial = exc.trajectory
    zq = None
    if partial is not None and len(partial):
        zq = float(_z_q_norm(partial).max())
    return RunSummary(
        name=name,
        certified=report.certified,
        radius=report.radius,
        decay_rate=report.decay_rate,
        fitted_rate=None,
        max_zq_settled=zq,
        envelope_violations=0,
        sandwich_failures=0,
        decrease_violations=0,
        exit_status=EXIT_ABORTED,
        steps=max(len(partial) - 1, 0) if partial is not None else 0,
        abort_reason=exc.reason,
        abort_time=exc.time,
    )


def certify_scenario(config: "ScenarioConfig") -> CertificationReport:
    """Certify a scenario's gains against its model and envelope."""
    settings = config.certification
    return certify(
        config.model,
        config.gains,
        config.envelope,
        samples=settings.samples,
        seed=settings.seed,
        safety_factor=settings.safety_factor,
        psi_points=settings.psi_grid,
        r_body=config.r_body,
    )


def run_scenario(
    config: "ScenarioConfig",
    allow_uncertified: bool = False,
    report: Optional[CertificationReport] = None,
) -> ScenarioResult:
    """
    Certify, check the envelope, integrate and summarize one scenario.

    Args:
        config: Parsed scenario
        allow_uncertified: Run even if the certificate fails
        report: Precomputed certificate for ``config`` (computed if omitted)

    Returns:
        ScenarioResult

    Raises:
        NotCertifiableError: If the gains fail certification and
            ``allow_uncertified`` is False
        EnvelopeViolationError: If the scenario leaves its envelope
        ScenarioAborted: On an antipodal or non-finite abort
    """
    if report is None:
        report = certify_scenario(config)
    if not report.certified:
        if not allow_uncertified:
            raise NotCertifiableError(
                f"Gains for '{config.name}' are not certified "
                f"(failing: {', '.join(report.failures)})"
            )
        warnings.warn(f"Running '{config.name}' with uncertified gains")
    check_envelope(config)

    params = PlantParams(model=config.model, r_body=config.r_body)
    controller = AttitudeController.from_model(config.model, config.gains, config.r_body)
    integration = config.integration
    logger.info(
        "Running '%s': dt = %g s, duration = %g s, %s",
        config.name,
        integration.dt,
        integration.duration,
        "zero-order hold" if integration.zero_order_hold else "continuous control",
    )
    trajectory = simulate(
        params,
        controller,
        config.reference,
        initial_state(config),
        integration.dt,
        integration.duration,
        lambda_J=report.lambda_J_effective,
        zero_order_hold=integration.zero_order_hold,
    )

    w = trajectory[_indexed("w_b", 3)].to_numpy()
    outside = int(np.sum(np.linalg.norm(w, axis=1) > config.envelope.w_max))
    if outside:
        warnings.warn(
            f"|w_b| exceeded w_max = {config.envelope.w_max:g} rad/s at {outside} records; "
            "the drift-mismatch bound does not cover them"
        )

    psi = trajectory["psi"].to_numpy()
    beyond = int(np.sum(psi > config.envelope.psi_max))
    if beyond:
        warnings.warn(
            f"psi exceeded psi_max = {config.envelope.psi_max:g} at {beyond} records "
            f"(largest {psi.max():.6g}); the certified bounds do not cover them"
        )

    summary = summarize(
        config.name,
        trajectory,
        report,
        config.model.perfect_knowledge,
    )
    return ScenarioResult(name=config.name, trajectory=trajectory, summary=summary, report=report)

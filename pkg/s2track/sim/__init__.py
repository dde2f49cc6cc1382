"""Closed-loop simulation: plant, reference profiles, integrator and scenarios."""

from s2track.sim.dynamics import MAX_DT, PlantParams, plant_derivative, rk4, rk4_step
from s2track.sim.reference import KINDS, ReferenceProfile, reference_step
from s2track.sim.scenario import (
    COLUMNS,
    EXIT_OK,
    EXIT_ABORTED,
    SETTLING_FRACTION,
    RunSummary,
    ScenarioResult,
    simulate,
    initial_state,
    check_envelope,
    summarize,
    aborted_summary,
    certify_scenario,
    run_scenario,
)

__all__ = [
    "MAX_DT",
    "PlantParams",
    "plant_derivative",
    "rk4",
    "rk4_step",
    "KINDS",
    "ReferenceProfile",
    "reference_step",
    "COLUMNS",
    "EXIT_OK",
    "EXIT_ABORTED",
    "SETTLING_FRACTION",
    "RunSummary",
    "ScenarioResult",
    "simulate",
    "initial_state",
    "check_envelope",
    "summarize",
    "aborted_summary",
    "certify_scenario",
    "run_scenario",
]

"""Pytest configuration and fixtures for s2track tests."""

from pathlib import Path

import numpy as np
import pytest

from s2track.certification import Envelope
from s2track.core import BodyState, Gains, InertiaModel, ReferenceState
from s2track.utils import exp_rodrigues, unit

SCENARIO_DIR = Path(__file__).parent.parent / "scenarios"

J_DESK = np.diag([0.02, 0.02, 0.04])

MINIMAL_TOML = """\
[plant]
J = [0.02, 0.02, 0.04, 0.0, 0.0, 0.0]

[gains]
Lambda = 1.0
eta = 1.0
gamma1 = 1.0
gamma2 = 2.0
gamma4 = 2.0
gamma5 = 1.0

[envelope]
wd_max = 0.5
wd_dot_max = 1.0
w_max = 2.0
"""


@pytest.fixture
def rng():
    """Seeded generator so every random test is reproducible."""
    return np.random.default_rng(20240611)


@pytest.fixture
def random_rotation():
    """Factory for random rotations drawn from a generator."""

    def make(gen: np.random.Generator, max_angle: float = np.pi) -> np.ndarray:
        return exp_rodrigues(unit(gen.normal(size=3)), gen.uniform(0.0, max_angle))

    return make


@pytest.fixture
def random_tracking_pair(random_rotation):
    """
    Factory for a random (BodyState, ReferenceState) pair whose pointing
    directions are at least ``min_gap`` away from antipodal.
    """

    def make(gen: np.random.Generator, min_gap: float = 1e-3, rate: float = 1.0):
        while True:
            Q = random_rotation(gen)
            Qd = random_rotation(gen)
            if (Q[:, 2] @ Qd[:, 2]) > -1.0 + min_gap:
                break
        state = BodyState(Q=Q, w_b=rate * gen.normal(size=3))
        ref = ReferenceState(Qd=Qd, wd_b=rate * gen.normal(size=3), wd_dot_b=gen.normal(size=3))
        return state, ref

    return make


@pytest.fixture
def along_flow():
    """
    Factory moving a (state, reference) pair a signed time ``h`` along the
    flow ``dQ/dt = Q w^x``, ``dQd/dt = Qd wd^x`` with the rates advanced
    linearly by the supplied accelerations.
    """

    def _exp(w: np.ndarray, h: float) -> np.ndarray:
        angle = np.linalg.norm(w) * h
        if angle == 0.0:
            return np.eye(3)
        return exp_rodrigues(w / np.linalg.norm(w), angle)

    def move(state: BodyState, ref: ReferenceState, h: float, w_dot=None):
        w_dot = np.zeros(3) if w_dot is None else w_dot
        moved = BodyState(Q=state.Q @ _exp(state.w_b, h), w_b=state.w_b + h * w_dot)
        moved_ref = ReferenceState(
            Qd=ref.Qd @ _exp(ref.wd_b, h),
            wd_b=ref.wd_b + h * ref.wd_dot_b,
            wd_dot_b=ref.wd_dot_b,
        )
        return moved, moved_ref

    return move


@pytest.fixture
def desk_inertia():
    """Desk-scale inertia (kg m^2)."""
    return J_DESK.copy()


@pytest.fixture
def perfect_model(desk_inertia):
    return InertiaModel(J=desk_inertia, J_hat=desk_inertia)


@pytest.fixture
def mismatched_model(desk_inertia):
    """Inertia estimate 10% too large."""
    return InertiaModel(J=desk_inertia, J_hat=1.1 * desk_inertia)


@pytest.fixture
def perfect_gains():
    return Gains(Lambda=1.0, eta=1.0, gamma1=1.0, gamma2=2.0, gamma4=2.0, gamma5=1.0)


@pytest.fixture
def robust_gains():
    """Gains certified for the 10% mismatch with psi_max = 1."""
    return Gains(Lambda=2.0, eta=1.0, gamma1=2.0, gamma2=10.0, gamma4=4.0, gamma5=20.0)


@pytest.fixture
def desk_envelope():
    return Envelope(wd_max=0.5, wd_dot_max=1.0, w_max=2.0)


@pytest.fixture
def robust_envelope():
    return Envelope(wd_max=0.5, wd_dot_max=1.0, w_max=2.0, psi_max=1.0)


@pytest.fixture
def minimal_toml():
    return MINIMAL_TOML


@pytest.fixture
def scenario_dir():
    return SCENARIO_DIR

"""Tests for the S² tracking errors and their kinematics."""

import numpy as np
import pytest

from s2track.control.error_geometry import (
    EPS_ANTIPODAL,
    attitude_error_psi,
    config_error,
    eq_dot,
    error_kinematics,
    feedforward_d,
    feedforward_d_alt,
    pointing_direction,
    tracking_errors,
    velocity_error,
)
from s2track.core import AntipodalError, BodyState, ReferenceState
from s2track.utils.rotations import E1, E2, E3, exp_rodrigues

FD_STEP = 1e-6


class TestAttitudeErrorFunction:
    """Test Psi and the configuration error vector."""

    def test_zero_at_alignment(self):
        assert attitude_error_psi(E3, E3) == 0.0

    def test_quarter_turn(self):
        assert attitude_error_psi(E1, E3) == pytest.approx(2.0 - np.sqrt(2.0), abs=1e-15)

    def test_antipodal_raises(self):
        with pytest.raises(AntipodalError) as info:
            attitude_error_psi(E3, -E3)
        assert info.value.cosine == pytest.approx(-1.0)

    def test_just_inside_antipodal_threshold(self):
        theta = np.pi - 1e-3
        qd = np.array([np.sin(theta), 0.0, np.cos(theta)])
        assert qd @ E3 > -1.0 + EPS_ANTIPODAL
        assert attitude_error_psi(E3, qd) < 2.0

    def test_config_error_norm(self, rng, random_tracking_pair):
        for _ in range(200):
            state, ref = random_tracking_pair(rng)
            cosine = (state.Q @ E3) @ (ref.Qd @ E3)
            e_q = config_error(state.Q, ref.Qd)
            assert e_q @ e_q == pytest.approx((1.0 - cosine) / 2.0, abs=1e-12)

    def test_invariant_under_common_world_rotation(
        self, rng, random_tracking_pair, random_rotation
    ):
        for _ in range(200):
            state, ref = random_tracking_pair(rng)
            S = random_rotation(rng)
            moved = tracking_errors(
                BodyState(Q=S @ state.Q, w_b=state.w_b),
                ReferenceState(Qd=S @ ref.Qd, wd_b=ref.wd_b, wd_dot_b=ref.wd_dot_b),
            )
            err = tracking_errors(state, ref)
            assert moved.psi == pytest.approx(err.psi, abs=1e-12)
            np.testing.assert_allclose(moved.e_q, err.e_q, atol=1e-12)
            np.testing.assert_allclose(moved.e_w, err.e_w, atol=1e-12)

    def test_psi_brackets_config_error(self, rng, random_tracking_pair):
        for _ in range(10_000):
            state, ref = random_tracking_pair(rng, min_gap=1e-9)
            err = tracking_errors(state, ref)
            eq2 = err.e_q @ err.e_q
            assert eq2 <= err.psi + 1e-9
            assert err.psi <= 2.0 * eq2 + 1e-9

    def test_psi_brackets_near_antipode(self):
        theta = np.arccos(-1.0 + 1e-6)
        Qd = exp_rodrigues(E1, theta)
        err = tracking_errors(BodyState(Q=np.eye(3), w_b=np.zeros(3)), ReferenceState.fixed(Qd))
        eq2 = err.e_q @ err.e_q
        assert eq2 <= err.psi + 1e-9
        assert err.psi <= 2.0 * eq2 + 1e-9

    def test_pointing_direction_with_custom_axis(self):
        R = exp_rodrigues(E3, np.pi / 2)
        np.testing.assert_allclose(pointing_direction(R, E1), E2, atol=1e-15)

    def test_config_error_is_body_frame(self, rng, random_tracking_pair):
        state, ref = random_tracking_pair(rng)
        q, qd = state.Q @ E3, ref.Qd @ E3
        e_q = config_error(state.Q, ref.Qd)
        # Rotated back to the world frame it is orthogonal to both directions.
        assert (state.Q @ e_q) @ q == pytest.approx(0.0, abs=1e-14)
        assert (state.Q @ e_q) @ qd == pytest.approx(0.0, abs=1e-14)


class TestKinematics:
    """Test dPsi/dt and de_q/dt against central differences along the flow."""

    def _central(self, f, state, ref, along_flow):
        plus = f(*along_flow(state, ref, FD_STEP))
        minus = f(*along_flow(state, ref, -FD_STEP))
        return (plus - minus) / (2.0 * FD_STEP)

    def test_psi_rate(self, rng, random_tracking_pair, along_flow):
        for _ in range(10):
            state, ref = random_tracking_pair(rng, min_gap=0.1)
            psi = lambda s, r: attitude_error_psi(s.Q @ E3, r.Qd @ E3)  # noqa: E731
            fd = self._central(psi, state, ref, along_flow)
            err = tracking_errors(state, ref)
            assert fd == pytest.approx(err.psi_dot, rel=1e-5, abs=1e-8)

    def test_config_error_rate(self, rng, random_tracking_pair, along_flow):
        for _ in range(10):
            state, ref = random_tracking_pair(rng, min_gap=0.1)
            e_q = lambda s, r: config_error(s.Q, r.Qd)  # noqa: E731
            fd = self._central(e_q, state, ref, along_flow)
            np.testing.assert_allclose(fd, eq_dot(state, ref), rtol=1e-5, atol=1e-8)

    def test_xi_annihilates_reference_rate(self, rng, random_tracking_pair):
        for _ in range(100):
            state, ref = random_tracking_pair(rng)
            _, Xi = error_kinematics(state.Q, ref.Qd)
            np.testing.assert_allclose(Xi @ ref.wd_b, 0.0, atol=1e-12)

    def test_velocity_error_rate(self, rng, random_tracking_pair, along_flow):
        # de_w/dt = w_dot + d
        for _ in range(10):
            state, ref = random_tracking_pair(rng, min_gap=0.1)
            w_dot = rng.normal(size=3)
            plus = velocity_error(*along_flow(state, ref, FD_STEP, w_dot))
            minus = velocity_error(*along_flow(state, ref, -FD_STEP, w_dot))
            fd = (plus - minus) / (2.0 * FD_STEP)
            np.testing.assert_allclose(fd, w_dot + feedforward_d(state, ref), rtol=1e-5, atol=1e-8)


class TestFeedforward:
    """Test the two forms of the reference feedforward."""

    def test_forms_agree(self, rng, random_tracking_pair):
        for _ in range(1000):
            state, ref = random_tracking_pair(rng)
            np.testing.assert_allclose(
                feedforward_d(state, ref), feedforward_d_alt(state, ref), rtol=0.0, atol=1e-13
            )

    def test_zero_for_motionless_reference(self, rng, random_rotation):
        state = BodyState(Q=random_rotation(rng), w_b=rng.normal(size=3))
        ref = ReferenceState.fixed(random_rotation(rng))
        np.testing.assert_array_equal(feedforward_d(state, ref), np.zeros(3))


class TestTrackingErrors:
    """Test the one-pass evaluation."""

    def test_matches_individual_functions(self, rng, random_tracking_pair):
        state, ref = random_tracking_pair(rng)
        err = tracking_errors(state, ref)
        np.testing.assert_array_equal(err.e_q, config_error(state.Q, ref.Qd))
        np.testing.assert_array_equal(err.e_w, velocity_error(state, ref))
        E, Xi = error_kinematics(state.Q, ref.Qd)
        np.testing.assert_array_equal(err.E, E)
        np.testing.assert_array_equal(err.Xi, Xi)

    def test_zero_error_state(self):
        Qd = exp_rodrigues(E2, 0.3)
        ref = ReferenceState(Qd=Qd, wd_b=np.array([0.0, 0.0, 0.2]), wd_dot_b=np.zeros(3))
        err = tracking_errors(BodyState(Q=Qd.copy(), w_b=np.array([0.0, 0.0, 0.2])), ref)
        assert err.psi == pytest.approx(0.0, abs=1e-13)
        np.testing.assert_allclose(err.z_q, 0.0, atol=1e-15)

    def test_antipodal_state_raises(self):
        Qd = exp_rodrigues(E1, np.pi)
        with pytest.raises(AntipodalError):
            tracking_errors(BodyState(Q=np.eye(3), w_b=np.zeros(3)), ReferenceState.fixed(Qd))

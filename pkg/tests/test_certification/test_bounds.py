"""Tests for lambda_J and the sampled perturbation bounds."""

import dataclasses

import numpy as np
import pytest

from s2track.certification.bounds import (
    BoundEstimates,
    Envelope,
    estimate_bounds,
    lambda_J,
    lambda_J_symmetric,
)
from s2track.core import InertiaModel, SingularInertiaError

SAMPLES = 4096


class TestLambdaJ:
    """Test the smallest eigenvalue of J^-1 J_hat."""

    def test_perfect_knowledge(self, perfect_model):
        assert lambda_J(perfect_model) == pytest.approx(1.0, rel=1e-14)

    def test_scalar_case(self):
        model = InertiaModel(J=np.eye(3), J_hat=1.1 * np.eye(3))
        assert lambda_J(model) == pytest.approx(1.1, rel=1e-14)

    def test_diagonal_case(self):
        model = InertiaModel(J=np.diag([1.0, 2.0, 3.0]), J_hat=np.diag([1.1, 1.8, 3.3]))
        assert lambda_J(model) == pytest.approx(0.9, rel=1e-14)
        assert lambda_J_symmetric(model) == pytest.approx(0.9, rel=1e-14)

    def test_invariant_under_joint_scaling(self):
        J = np.array([[2.0, 0.3, 0.0], [0.3, 1.5, 0.1], [0.0, 0.1, 1.0]])
        J_hat = np.array([[2.2, 0.0, 0.1], [0.0, 1.4, 0.0], [0.1, 0.0, 1.1]])
        base = lambda_J(InertiaModel(J=J, J_hat=J_hat))
        scaled = lambda_J(InertiaModel(J=7.0 * J, J_hat=7.0 * J_hat))
        assert scaled == pytest.approx(base, rel=1e-12)

    def test_symmetric_part_is_more_conservative(self):
        J = np.diag([1.0, 2.0, 3.0])
        J_hat = np.array([[1.2, 0.4, 0.0], [0.4, 1.9, 0.2], [0.0, 0.2, 3.1]])
        model = InertiaModel(J=J, J_hat=J_hat)
        eigs = np.linalg.eigvals(np.linalg.solve(J, J_hat))
        assert lambda_J(model) == pytest.approx(eigs.real.min(), rel=1e-12)
        assert lambda_J_symmetric(model) <= lambda_J(model) + 1e-15

    def test_indefinite_estimate_rejected(self, desk_inertia):
        with pytest.raises(SingularInertiaError):
            InertiaModel(J=desk_inertia, J_hat=np.diag([0.02, -0.02, 0.04]))


class TestEnvelope:
    """Test envelope validation."""

    def test_defaults(self):
        env = Envelope(wd_max=0.5, wd_dot_max=1.0, w_max=2.0)
        assert env.psi_max == 2.0
        assert env.f_max is None
        assert env.min_cosine == pytest.approx(-1.0)

    def test_min_cosine_matches_psi(self):
        env = Envelope(wd_max=0.5, wd_dot_max=1.0, w_max=2.0, psi_max=1.0)
        n = np.sqrt(2.0 * (1.0 + env.min_cosine))
        assert 2.0 - n == pytest.approx(1.0)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"wd_max": -0.1},
            {"wd_dot_max": np.inf},
            {"psi_max": 0.0},
            {"psi_max": 2.5},
            {"f_max": -1.0},
        ],
    )
    def test_invalid(self, kwargs):
        base = {"wd_max": 0.5, "wd_dot_max": 1.0, "w_max": 2.0}
        base.update(kwargs)
        with pytest.raises(ValueError):
            Envelope(**base)


class TestEstimateBounds:
    """Test the sampled sups."""

    def test_zero_under_perfect_knowledge(self, perfect_model, perfect_gains, desk_envelope):
        bounds = estimate_bounds(perfect_model, perfect_gains, desk_envelope, samples=SAMPLES)
        for name in ("A1_max", "A2_max", "B_max", "Upsilon_max", "A_breve_max", "f_max"):
            assert getattr(bounds, name) == 0.0, name

    def test_zero_with_explicit_zero_drift_bound(self, perfect_model, perfect_gains):
        env = Envelope(wd_max=0.5, wd_dot_max=1.0, w_max=2.0, f_max=0.0)
        bounds = estimate_bounds(perfect_model, perfect_gains, env, samples=SAMPLES)
        assert bounds.B_max == 0.0
        assert bounds.A_breve_max == 0.0

    def test_asserted_drift_bound_enters_B(self, perfect_model, perfect_gains):
        env = Envelope(wd_max=0.5, wd_dot_max=1.0, w_max=2.0, f_max=0.5)
        bounds = estimate_bounds(perfect_model, perfect_gains, env, samples=SAMPLES)
        assert bounds.f_max == 0.5
        assert bounds.B_max == pytest.approx(1.1 * perfect_gains.eta * 0.5, rel=1e-14)
        assert bounds.A1_max == 0.0

    def test_isotropic_A2(self, perfect_gains):
        model = InertiaModel(J=np.eye(3), J_hat=1.1 * np.eye(3))
        env = Envelope(wd_max=0.5, wd_dot_max=1.0, w_max=2.0, psi_max=1.0)
        bounds = estimate_bounds(model, perfect_gains, env, samples=10_000)
        expected = 0.1 * env.wd_max * 1.1
        assert bounds.A2_max <= expected * (1.0 + 1e-12)
        assert bounds.A2_max == pytest.approx(expected, rel=1e-3)

    def test_A2_linear_in_reference_rate(self, mismatched_model, perfect_gains, robust_envelope):
        wider = dataclasses.replace(robust_envelope, wd_max=2.0 * robust_envelope.wd_max)
        base = estimate_bounds(mismatched_model, perfect_gains, robust_envelope, samples=SAMPLES)
        doubled = estimate_bounds(mismatched_model, perfect_gains, wider, samples=SAMPLES)
        assert doubled.A2_max == pytest.approx(2.0 * base.A2_max, rel=1e-12)

    def test_drift_mismatch_quadratic_in_body_rate(
        self, mismatched_model, perfect_gains, robust_envelope
    ):
        wider = dataclasses.replace(robust_envelope, w_max=2.0 * robust_envelope.w_max)
        base = estimate_bounds(mismatched_model, perfect_gains, robust_envelope, samples=SAMPLES)
        grown = estimate_bounds(mismatched_model, perfect_gains, wider, samples=SAMPLES)
        assert base.f_max > 0.0
        assert grown.f_max == pytest.approx(4.0 * base.f_max, rel=1e-12)
        assert grown.A1_max == base.A1_max

    def test_deterministic(self, mismatched_model, robust_gains, robust_envelope):
        a = estimate_bounds(mismatched_model, robust_gains, robust_envelope, samples=SAMPLES, seed=7)
        b = estimate_bounds(mismatched_model, robust_gains, robust_envelope, samples=SAMPLES, seed=7)
        assert a == b

    def test_safety_factor_scales_every_sup(self, mismatched_model, robust_gains, robust_envelope):
        plain = estimate_bounds(
            mismatched_model, robust_gains, robust_envelope, samples=SAMPLES, safety_factor=1.0
        )
        inflated = estimate_bounds(
            mismatched_model, robust_gains, robust_envelope, samples=SAMPLES, safety_factor=2.0
        )
        assert inflated.A1_max == pytest.approx(2.0 * plain.A1_max, rel=1e-14)
        assert inflated.Upsilon_max == pytest.approx(2.0 * plain.Upsilon_max, rel=1e-14)

    def test_mismatch_gives_positive_bounds(self, mismatched_model, robust_gains, robust_envelope):
        bounds = estimate_bounds(mismatched_model, robust_gains, robust_envelope, samples=SAMPLES)
        assert bounds.A1_max > 0.0
        assert bounds.A2_max > 0.0
        assert bounds.Upsilon_max > 0.0
        assert bounds.samples == SAMPLES

    @pytest.mark.parametrize(
        "field,ladder",
        [
            ("wd_max", [0.3, 0.6, 1.2]),
            ("wd_dot_max", [0.5, 1.0, 2.0]),
            ("w_max", [1.0, 2.0, 4.0]),
            ("psi_max", [0.8, 1.2, 1.6]),
            ("f_max", [0.0, 0.01, 1.0]),
        ],
    )
    def test_widening_envelope_never_lowers_bounds(self, robust_gains, field, ladder):
        J = np.diag([0.02, 0.02, 0.04])
        J_hat = np.array([[0.021, 0.001, 0.0], [0.001, 0.019, 0.0005], [0.0, 0.0005, 0.043]])
        model = InertiaModel(J=J, J_hat=J_hat, tau_hat=np.array([1e-4, 0.0, -2e-4]))
        base = Envelope(wd_max=0.3, wd_dot_max=0.5, w_max=1.0, psi_max=0.8)
        names = ("A1_max", "A2_max", "B_max", "Upsilon_max", "A_breve_max", "f_max")
        previous = None
        for value in ladder:
            env = dataclasses.replace(base, **{field: value})
            bounds = estimate_bounds(model, robust_gains, env, samples=1024, seed=3)
            if previous is not None:
                for name in names:
                    assert getattr(bounds, name) >= getattr(previous, name), (field, value, name)
            previous = bounds

    def test_A1_grows_with_psi_max_under_mismatch(self, mismatched_model, perfect_gains):
        narrow = Envelope(wd_max=0.5, wd_dot_max=1.0, w_max=2.0, psi_max=0.5)
        wide = dataclasses.replace(narrow, psi_max=1.5)
        a = estimate_bounds(mismatched_model, perfect_gains, narrow, samples=SAMPLES)
        b = estimate_bounds(mismatched_model, perfect_gains, wide, samples=SAMPLES)
        assert b.A1_max > a.A1_max

    def test_tiny_cap_warns(self, mismatched_model, perfect_gains):
        env = Envelope(wd_max=0.5, wd_dot_max=1.0, w_max=2.0, psi_max=0.05)
        with pytest.warns(UserWarning, match="samples lie inside"):
            estimate_bounds(mismatched_model, perfect_gains, env, samples=256)

    def test_full_sphere_with_mismatch_warns(self, mismatched_model, robust_gains, desk_envelope):
        with pytest.warns(UserWarning, match="psi_max"):
            estimate_bounds(mismatched_model, robust_gains, desk_envelope, samples=256)

    def test_rejects_empty_sample(self, perfect_model, perfect_gains, desk_envelope):
        with pytest.raises(ValueError):
            estimate_bounds(perfect_model, perfect_gains, desk_envelope, samples=0)

    def test_zero_constructor(self):
        zero = BoundEstimates.zero()
        assert zero.Upsilon_max == 0.0
        assert zero.safety_factor == 1.1

"""Tests for the certification report."""

import json
import math

import numpy as np
import pytest

from s2track.certification import (
    BoundEstimates,
    CertificationReport,
    Envelope,
    certify,
    certify_with_bounds,
    radius_versus_gain_scale,
)
from s2track.core import Gains, InertiaModel

SAMPLES = 4096


@pytest.fixture
def robust_report(mismatched_model, robust_gains, robust_envelope):
    return certify(mismatched_model, robust_gains, robust_envelope, samples=10_000)


class TestCertify:
    """Test end-to-end certification."""

    def test_perfect_knowledge(self, perfect_model, perfect_gains, desk_envelope):
        report = certify(perfect_model, perfect_gains, desk_envelope, samples=SAMPLES)
        assert report.certified
        assert report.failures == []
        assert report.radius == 0.0
        assert report.e_w_threshold == 0.0
        assert report.lambda_J == pytest.approx(1.0)
        assert report.decay_rate > 0.0

    def test_robust_gains_certified(self, robust_report):
        assert robust_report.certified, robust_report.failures
        assert 0.0 < robust_report.radius < 1.0
        assert robust_report.lambda_J_effective == pytest.approx(1.1)
        for name in ("1e", "1f", "1g", "1h"):
            assert robust_report.gain_checks[name].margin >= 0.0
        for name in ("8a", "8b"):
            assert robust_report.set_conditions[name].margin > 0.0

    def test_weak_gains_fail_without_raising(self, mismatched_model, robust_envelope):
        weak = Gains(Lambda=1.0, eta=0.01, gamma1=0.01, gamma2=0.01, gamma4=0.01, gamma5=0.01)
        report = certify(mismatched_model, weak, robust_envelope, samples=SAMPLES)
        assert not report.certified
        assert "1h" in report.failures
        assert math.isinf(report.e_w_threshold)

    def test_effective_lambda_uses_symmetric_part(self, perfect_gains, desk_envelope):
        J = np.diag([1.0, 2.0, 3.0])
        J_hat = np.array([[1.2, 0.4, 0.0], [0.4, 1.9, 0.2], [0.0, 0.2, 3.1]])
        env = Envelope(wd_max=0.1, wd_dot_max=0.1, w_max=0.1, psi_max=0.5)
        report = certify(InertiaModel(J=J, J_hat=J_hat), perfect_gains, env, samples=256)
        assert report.lambda_J_effective == min(report.lambda_J, report.lambda_J_sym)

    def test_records_sampling_settings(self, robust_report):
        assert robust_report.bounds.samples == 10_000
        assert robust_report.bounds.seed == 42
        assert robust_report.bounds.safety_factor == 1.1
        assert robust_report.psi_max == 1.0
        assert robust_report.psi_grid == 64

    def test_certify_with_bounds_matches(self, robust_gains, robust_report):
        again = certify_with_bounds(
            robust_gains,
            robust_report.lambda_J,
            robust_report.lambda_J_sym,
            robust_report.bounds,
            psi_max=1.0,
        )
        assert again.to_dict() == robust_report.to_dict()


class TestReportSerialization:
    """Test the JSON document."""

    def test_round_trip(self, robust_report):
        restored = CertificationReport.from_json(robust_report.to_json())
        assert restored.to_dict() == robust_report.to_dict()
        assert restored.certified == robust_report.certified

    def test_stable_field_names(self, robust_report):
        data = json.loads(robust_report.to_json())
        for key in (
            "lambda_J",
            "bounds",
            "gain_checks",
            "W_eigs",
            "radius",
            "e_w_threshold",
            "set_conditions",
            "decay_rate",
            "certified",
        ):
            assert key in data
        assert set(data["W_eigs"]) == {"W1", "W2", "W3", "W4", "W5"}
        assert set(data["gain_checks"]["1f"]) == {"name", "lhs", "rhs", "margin", "passed"}

    def test_infinite_threshold_survives(self, mismatched_model, robust_envelope):
        weak = Gains(Lambda=1.0, eta=0.01, gamma1=0.01, gamma2=0.01, gamma4=0.01, gamma5=0.01)
        report = certify(mismatched_model, weak, robust_envelope, samples=256)
        text = report.to_json()
        assert "Infinity" not in text
        assert json.loads(text)["e_w_threshold"] == "inf"
        restored = CertificationReport.from_json(text)
        assert math.isinf(restored.e_w_threshold)

    def test_summary_lines(self, robust_report):
        lines = robust_report.summary_lines()
        assert lines[0].startswith("✓")
        assert any("envelope radius" in line for line in lines)
        assert sum("(1" in line or "(8" in line for line in lines) == 6


class TestGainScaling:
    """Test the radius-versus-gain study."""

    def test_radius_shrinks_as_gains_grow(self, mismatched_model, robust_gains, robust_envelope):
        rows = radius_versus_gain_scale(
            mismatched_model, robust_gains, robust_envelope, [1.0, 2.0, 4.0], samples=SAMPLES
        )
        radii = [radius for _, radius, _ in rows]
        assert radii[0] > radii[1] > radii[2]
        assert radii[1] == pytest.approx(radii[0] / math.sqrt(2.0), rel=1e-12)
        assert all(certified for _, _, certified in rows)

    def test_scales_are_echoed(self, perfect_model, perfect_gains, desk_envelope):
        rows = radius_versus_gain_scale(
            perfect_model, perfect_gains, desk_envelope, [0.5, 3], samples=256
        )
        assert [scale for scale, _, _ in rows] == [0.5, 3.0]
        assert all(radius == 0.0 for _, radius, _ in rows)

    def test_psi_grid_matches_certify(self, mismatched_model, robust_gains, robust_envelope):
        rows = radius_versus_gain_scale(
            mismatched_model, robust_gains, robust_envelope, [1.0], samples=SAMPLES, psi_points=9
        )
        report = certify(
            mismatched_model, robust_gains, robust_envelope, samples=SAMPLES, psi_points=9
        )
        assert rows == [(1.0, report.radius, report.certified)]

    def test_zero_bounds_report(self, perfect_gains):
        report = certify_with_bounds(perfect_gains, 1.0, 1.0, BoundEstimates.zero())
        assert report.certified

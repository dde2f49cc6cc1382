"""Tests for error geometry and the control law."""

"""Tests for the Lyapunov monitors."""

"""Tests for s2track package."""

"""Tests for scenario configuration and writers."""

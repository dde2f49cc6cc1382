"""Tests for rotation utilities."""

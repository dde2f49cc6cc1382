"""Tests for the closed-loop simulator."""

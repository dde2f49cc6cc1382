"""Tests for gain certification."""

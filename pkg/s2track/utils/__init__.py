"""Utility functions and helpers."""

from s2track.utils.rotations import (
    TOL_ORTH,
    TOL_SKEW,
    TOL_UNIT,
    E1,
    E2,
    E3,
    hat,
    vee,
    exp_rodrigues,
    reorthonormalize,
    orthogonality_error,
    is_rotation,
    unit,
)
from s2track.utils.serialization import json_safe, restore_non_finite

__all__ = [
    "TOL_ORTH",
    "TOL_SKEW",
    "TOL_UNIT",
    "E1",
    "E2",
    "E3",
    "hat",
    "vee",
    "exp_rodrigues",
    "reorthonormalize",
    "orthogonality_error",
    "is_rotation",
    "unit",
    "json_safe",
    "restore_non_finite",
]

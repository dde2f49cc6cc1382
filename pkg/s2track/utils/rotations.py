"""Small-matrix primitives on SO(3) and S²."""

import numpy as np

from s2track.core.errors import DegenerateMatrixError, NotSkewError

# Tolerances shared by every module that checks rotations or unit vectors.
TOL_ORTH = 1e-9
TOL_SKEW = 1e-9
TOL_UNIT = 1e-12
TOL_DET = 1e-6

_NEWTON_TOL = 1e-14
_NEWTON_MAX_ITER = 50

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])


def hat(r: np.ndarray) -> np.ndarray:
    """
    Map a 3-vector to its skew-symmetric matrix.

    Args:
        r: Vector (r1, r2, r3)

    Returns:
        3x3 matrix ``r^x`` with ``hat(r) @ w == np.cross(r, w)``
    """
    return np.array(
        [
            [0.0, -r[2], r[1]],
            [r[2], 0.0, -r[0]],
            [-r[1], r[0], 0.0],
        ]
    )


def vee(m: np.ndarray) -> np.ndarray:
    """
    Inverse of :func:`hat`.

    Args:
        m: Skew-symmetric 3x3 matrix

    Returns:
        The vector (m32, m13, m21)

    Raises:
        NotSkewError: If ``||m + m^T||_F`` exceeds ``TOL_SKEW``
    """
    m = np.asarray(m, dtype=float)
    asym = np.linalg.norm(m + m.T)
    if asym > TOL_SKEW:
        raise NotSkewError(
            f"Matrix is not skew-symmetric: ||m + m^T||_F = {asym:.3e} "
            f"(tolerance {TOL_SKEW:.0e})"
        )
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


def exp_rodrigues(axis: np.ndarray, angle: float) -> np.ndarray:
    """
    Rotation by ``angle`` radians about the unit vector ``axis``.

    Evaluates ``I + sin(angle) xi^x + (1 - cos(angle)) (xi^x)^2``. The axis is
    assumed to be unit-norm; use :func:`unit` first if it may not be.

    Args:
        axis: Unit rotation axis
        angle: Rotation angle in radians

    Returns:
        3x3 rotation matrix
    """
    k = hat(axis)
    return np.eye(3) + np.sin(angle) * k + (1.0 - np.cos(angle)) * (k @ k)


def reorthonormalize(m: np.ndarray) -> np.ndarray:
    """
    Nearest rotation to ``m`` in the Frobenius norm.

    Uses the Newton iteration ``m <- (m + m^-T) / 2`` for the orthogonal polar
    factor. A matrix that is already orthogonal to ``1e-14`` is returned as is.

    Args:
        m: 3x3 matrix with positive determinant

    Returns:
        Rotation matrix

    Raises:
        DegenerateMatrixError: If ``det(m) <= 1e-6``
    """
    m = np.asarray(m, dtype=float)
    det = np.linalg.det(m)
    if not det > TOL_DET:
        raise DegenerateMatrixError(
            f"Cannot project onto SO(3): det = {det:.3e} (must exceed {TOL_DET:.0e})"
        )

    eye = np.eye(3)
    for _ in range(_NEWTON_MAX_ITER):
        if np.linalg.norm(m.T @ m - eye) <= _NEWTON_TOL:
            break
        m = 0.5 * (m + np.linalg.inv(m).T)
    return m


def orthogonality_error(m: np.ndarray) -> float:
    """Frobenius norm of ``m^T m - I``."""
    return float(np.linalg.norm(m.T @ m - np.eye(3)))


def is_rotation(m: np.ndarray, tol: float = TOL_ORTH) -> bool:
    """Check the SO(3) invariants (orthogonality and unit determinant)."""
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        return False
    return orthogonality_error(m) < tol and abs(np.linalg.det(m) - 1.0) < tol


def unit(v: np.ndarray) -> np.ndarray:
    """
    Normalize a vector.

    Raises:
        ValueError: If ``v`` has zero (or non-finite) length
    """
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if not np.isfinite(n) or n == 0.0:
        raise ValueError(f"Cannot normalize vector {v.tolist()}")
    return v / n

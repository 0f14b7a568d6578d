"""Primitive operations on the unit sphere and the rotation group.

Points on the sphere are plain numpy arrays of shape (3,); rotations are
numpy arrays of shape (3, 3), row-major. Everything is double precision.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

# squared distance from the vertical axis below which a point counts as a pole;
# the generic frame formula divides by that distance and degrades there
_POLE_TOL = 1e-24


def rotation_about_z(phi):
    """Rotation by angle phi about the vertical axis e3."""
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def base_frame(p):
    """An explicit rotation H with H e3 = p.

    Three cases: identity at the north pole, diag(1, -1, -1) at the south
    pole, and otherwise the closed-form frame whose third column is p.
    """
    p = np.asarray(p, dtype=float)
    x, y, z = p
    rho2 = x * x + y * y
    if rho2 < _POLE_TOL:
        if z > 0:
            return np.eye(3)
        return np.diag([1.0, -1.0, -1.0])
    rho = math.sqrt(rho2)
    return np.array(
        [
            [y / rho, z * x / rho, x],
            [-x / rho, z * y / rho, y],
            [0.0, -rho, z],
        ]
    )


def base_frames(points):
    """Vectorized base_frame for an (r, 3) array of unit vectors."""
    pts = np.asarray(points, dtype=float)
    x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
    rho2 = x * x + y * y
    generic = rho2 >= _POLE_TOL
    rho = np.sqrt(np.where(generic, rho2, 1.0))
    out = np.zeros((len(pts), 3, 3))
    out[:, 0, 0] = np.where(generic, y / rho, 1.0)
    out[:, 0, 1] = np.where(generic, z * x / rho, 0.0)
    out[:, 0, 2] = np.where(generic, x, 0.0)
    out[:, 1, 1] = np.where(generic, z * y / rho, np.where(z > 0, 1.0, -1.0))
    out[:, 1, 0] = np.where(generic, -x / rho, 0.0)
    out[:, 1, 2] = np.where(generic, y, 0.0)
    out[:, 2, 1] = np.where(generic, -rho, 0.0)
    out[:, 2, 2] = np.where(generic, z, np.where(z > 0, 1.0, -1.0))
    return out


def so3_dist_sq(a, b):
    """Squared Frobenius distance between two rotations, 6 - 2 trace(a^T b)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return 6.0 - 2.0 * float(np.einsum("ij,ij->", a, b))


def haar_rotation(rng):
    """One rotation drawn from the invariant (Haar) distribution.

    Method: four standard Gaussians normalized to a unit quaternion, mapped
    to its rotation matrix. Exact and branch-free.
    """
    return quaternion_matrix(_unit_quaternions(rng, 1))[0]


def haar_rotations(rng, count):
    """A batch of independent Haar rotations, shape (count, 3, 3)."""
    return quaternion_matrix(_unit_quaternions(rng, count))


def _unit_quaternions(rng, count):
    q = rng.standard_normal((count, 4))
    norm = np.linalg.norm(q, axis=1, keepdims=True)
    # a zero draw has probability zero; resampling keeps the law exact
    bad = norm[:, 0] < 1e-12
    while bad.any():
        q[bad] = rng.standard_normal((int(bad.sum()), 4))
        norm = np.linalg.norm(q, axis=1, keepdims=True)
        bad = norm[:, 0] < 1e-12
    return q / norm


def quaternion_matrix(q):
    """Rotation matrices for an array of unit quaternions, shape (m, 4) -> (m, 3, 3)."""
    q = np.atleast_2d(np.asarray(q, dtype=float))
    w, x, y, z = q[:, 0], q[:, 1], q[:, 2], q[:, 3]
    m = np.empty((len(q), 3, 3))
    m[:, 0, 0] = 1 - 2 * (y * y + z * z)
    m[:, 0, 1] = 2 * (x * y - w * z)
    m[:, 0, 2] = 2 * (x * z + w * y)
    m[:, 1, 0] = 2 * (x * y + w * z)
    m[:, 1, 1] = 1 - 2 * (x * x + z * z)
    m[:, 1, 2] = 2 * (y * z - w * x)
    m[:, 2, 0] = 2 * (x * z - w * y)
    m[:, 2, 1] = 2 * (y * z + w * x)
    m[:, 2, 2] = 1 - 2 * (x * x + y * y)
    return m


def inverse_stereographic(z):
    """Map a complex number to the unit sphere; infinity maps to (0, 0, 1).

    Convention: the north pole is the point at infinity, so z = 0 lands on
    the south pole and the unit circle lands on the equator.
    """
    z = complex(z)
    if not (cmath.isfinite(z)):
        return np.array([0.0, 0.0, 1.0])
    u, v = z.real, z.imag
    m2 = u * u + v * v
    if m2 > 1e16:
        # work with reciprocals to dodge overflow for huge |z|
        q = 1.0 / m2
        return np.array([2.0 * (u * q) / (1.0 + q), 2.0 * (v * q) / (1.0 + q), (1.0 - q) / (1.0 + q)])
    den = 1.0 + m2
    return np.array([2.0 * u / den, 2.0 * v / den, (m2 - 1.0) / den])


def unit_vector(v):
    """Normalize v to the sphere; rejects near-zero input."""
    v = np.asarray(v, dtype=float)
    n = float(np.linalg.norm(v))
    if n < 1e-150:
        raise ValueError("cannot normalize a (near-)zero vector")
    return v / n


def is_rotation(m, tol=1e-10):
    """Check orthogonality and unit determinant within tol."""
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        return False
    if not np.all(np.abs(m.T @ m - np.eye(3)) <= tol):
        return False
    return abs(float(np.linalg.det(m)) - 1.0) <= tol

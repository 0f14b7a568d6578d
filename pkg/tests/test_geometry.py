"""Sphere and rotation primitives: frames, Haar sampling, stereographic map."""

import math

import numpy as np
import pytest

from so3energy.geometry import (
    base_frame,
    base_frames,
    haar_rotation,
    haar_rotations,
    inverse_stereographic,
    is_rotation,
    quaternion_matrix,
    rotation_about_z,
    so3_dist_sq,
    unit_vector,
)


def random_sphere_points(rng, count):
    v = rng.standard_normal((count, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def test_rotation_about_z_basics():
    assert np.allclose(rotation_about_z(0.0), np.eye(3))
    r = rotation_about_z(np.pi / 2)
    assert np.allclose(r @ np.array([1.0, 0.0, 0.0]), [0.0, 1.0, 0.0], atol=1e-15)
    assert np.allclose(r @ np.array([0.0, 0.0, 1.0]), [0.0, 0.0, 1.0])
    assert is_rotation(r)
    # group law on the circle
    a, b = 0.7, -1.9
    assert np.allclose(rotation_about_z(a) @ rotation_about_z(b), rotation_about_z(a + b))


def test_base_frame_maps_pole_to_point():
    rng = np.random.default_rng(5)
    for p in random_sphere_points(rng, 50):
        h = base_frame(p)
        assert is_rotation(h, tol=1e-12)
        assert np.allclose(h @ np.array([0.0, 0.0, 1.0]), p, atol=1e-14)


def test_base_frame_at_poles():
    north = base_frame([0.0, 0.0, 1.0])
    south = base_frame([0.0, 0.0, -1.0])
    assert np.array_equal(north, np.eye(3))
    assert is_rotation(south, tol=0.0)
    assert np.allclose(south @ np.array([0.0, 0.0, 1.0]), [0.0, 0.0, -1.0])


def test_base_frames_matches_scalar_version():
    rng = np.random.default_rng(6)
    pts = np.vstack([random_sphere_points(rng, 40), [[0, 0, 1.0]], [[0, 0, -1.0]]])
    batch = base_frames(pts)
    for k, p in enumerate(pts):
        assert np.array_equal(batch[k], base_frame(p))


def test_so3_dist_sq_range_and_exact_values():
    assert so3_dist_sq(np.eye(3), np.eye(3)) == 0.0
    # rotation by pi about z against the identity: trace = -1 + 0 + ... actually
    # diag(-1, -1, 1), trace 1 - 2 = -1, squared distance 6 + 2 = 8
    assert so3_dist_sq(np.eye(3), rotation_about_z(np.pi)) == pytest.approx(8.0, abs=1e-12)
    rng = np.random.default_rng(7)
    for _ in range(20):
        a, b = haar_rotation(rng), haar_rotation(rng)
        d = so3_dist_sq(a, b)
        assert 0.0 <= d <= 8.0 + 1e-12
        assert d == pytest.approx(np.sum((a - b) ** 2), abs=1e-12)


def test_haar_rotation_invariance_moments():
    # under the invariant measure E[m_ij] = 0 and E[m_ij^2] = 1/3
    rng = np.random.default_rng(11)
    ms = haar_rotations(rng, 40000)
    mean = ms.mean(axis=0)
    second = (ms**2).mean(axis=0)
    assert np.all(np.abs(mean) < 0.02)
    assert np.all(np.abs(second - 1.0 / 3.0) < 0.02)
    for m in ms[:25]:
        assert is_rotation(m)


def test_haar_rotations_match_scalar_stream():
    a = haar_rotations(np.random.default_rng(3), 4)
    rng = np.random.default_rng(3)
    b = np.stack([haar_rotation(rng) for _ in range(4)])
    assert np.array_equal(a, b)


def test_quaternion_matrix_double_cover():
    rng = np.random.default_rng(12)
    q = rng.standard_normal(4)
    q /= np.linalg.norm(q)
    assert np.allclose(quaternion_matrix(q), quaternion_matrix(-q))


def test_inverse_stereographic_conventions():
    assert np.allclose(inverse_stereographic(0.0), [0.0, 0.0, -1.0])
    assert np.allclose(inverse_stereographic(complex("inf")), [0.0, 0.0, 1.0])
    assert np.allclose(inverse_stereographic(1.0), [1.0, 0.0, 0.0])
    assert np.allclose(inverse_stereographic(1j), [0.0, 1.0, 0.0])
    # huge inputs approach the north pole without overflow
    p = inverse_stereographic(1e200 + 1e200j)
    assert math.isfinite(p[0]) and math.isfinite(p[1])
    assert p[2] == pytest.approx(1.0, abs=1e-15)
    # all images live on the sphere
    rng = np.random.default_rng(13)
    for _ in range(50):
        z = complex(*rng.standard_normal(2)) * 10 ** rng.uniform(-3, 3)
        assert np.linalg.norm(inverse_stereographic(z)) == pytest.approx(1.0, abs=1e-12)


def test_unit_vector():
    assert np.allclose(unit_vector([3.0, 0.0, 4.0]), [0.6, 0.0, 0.8])
    with pytest.raises(ValueError):
        unit_vector([0.0, 0.0, 0.0])


def test_is_rotation_rejects_reflections_and_junk():
    assert not is_rotation(np.diag([1.0, 1.0, -1.0]))
    assert not is_rotation(2.0 * np.eye(3))
    assert not is_rotation(np.eye(2))
    assert is_rotation(np.eye(3))

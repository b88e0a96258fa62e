import numpy as np
import pytest

from graspmap.geom import (Pose, euler_zyx_from_matrix, look_at, matrix_from_quat,
                           normalize, quat_from_euler_zyx, quat_from_matrix,
                           quat_multiply, quat_rotate)


def random_quat(rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    return q if q[0] >= 0 else -q


def test_euler_identity():
    q = quat_from_euler_zyx(0.0, 0.0, 0.0)
    assert np.allclose(q, [1, 0, 0, 0], atol=1e-15)


def test_euler_yaw_minus_90():
    # yaw -pi/2 rotates +X to (0, -1, 0)
    q = quat_from_euler_zyx(-np.pi / 2, 0.0, 0.0)
    assert np.allclose(q, [np.cos(np.pi / 4), 0, 0, -np.sin(np.pi / 4)], atol=1e-12)
    assert np.allclose(quat_rotate(q, [1, 0, 0]), [0, -1, 0], atol=1e-12)


def test_quat_matrix_round_trip(rng):
    for _ in range(200):
        q = random_quat(rng)
        q2 = quat_from_matrix(matrix_from_quat(q))
        assert min(np.linalg.norm(q - q2), np.linalg.norm(q + q2)) < 1e-9


def test_euler_round_trip(rng):
    for _ in range(200):
        q = random_quat(rng)
        yaw, pitch, roll = euler_zyx_from_matrix(matrix_from_quat(q))
        q2 = quat_from_euler_zyx(yaw, pitch, roll)
        assert min(np.linalg.norm(q - q2), np.linalg.norm(q + q2)) < 1e-9


def test_euler_gimbal_lock():
    for pitch in (np.pi / 2, -np.pi / 2):
        q = quat_from_euler_zyx(0.3, pitch, -0.7)
        ypr = euler_zyx_from_matrix(matrix_from_quat(q))
        q2 = quat_from_euler_zyx(*ypr)
        # the yaw/roll split is not unique at the singularity; the action is
        assert np.allclose(matrix_from_quat(q), matrix_from_quat(q2), atol=1e-9)


def test_rotation_preserves_norms_and_dots(rng):
    for _ in range(100):
        q = random_quat(rng)
        a, b = rng.normal(size=3), rng.normal(size=3)
        ra, rb = quat_rotate(q, a), quat_rotate(q, b)
        assert abs(np.linalg.norm(ra) - np.linalg.norm(a)) < 1e-9
        assert abs(ra @ rb - a @ b) < 1e-9


def test_quat_multiply_matches_matrix_product(rng):
    qa, qb = random_quat(rng), random_quat(rng)
    m = matrix_from_quat(quat_multiply(qa, qb))
    assert np.allclose(m, matrix_from_quat(qa) @ matrix_from_quat(qb), atol=1e-12)


def test_pose_compose_inverse(rng):
    for _ in range(50):
        p1 = Pose(rng.normal(size=3), random_quat(rng))
        p2 = Pose(rng.normal(size=3), random_quat(rng))
        x = rng.normal(size=3)
        assert np.allclose(p1.compose(p2).transform_point(x),
                           p1.transform_point(p2.transform_point(x)), atol=1e-9)
        ident = p1.compose(p1.inverse())
        assert ident.almost_equal(Pose(), tol=1e-9)
        assert np.allclose(p1.inverse_transform_point(p1.transform_point(x)), x,
                           atol=1e-9)


def test_pose_compose_associative(rng):
    p1, p2, p3 = (Pose(rng.normal(size=3), random_quat(rng)) for _ in range(3))
    a = p1.compose(p2).compose(p3)
    b = p1.compose(p2.compose(p3))
    assert a.almost_equal(b, tol=1e-9)


def test_look_at_spec_example():
    pose = look_at([0, 0.5, 0.25], [0, 0, 0.25])
    fwd = pose.transform_direction([0, 0, 1])
    assert np.allclose(fwd, [0, -1, 0], atol=1e-12)
    # +Y is image-down
    down = pose.transform_direction([0, 1, 0])
    assert np.allclose(down, [0, 0, -1], atol=1e-12)


def test_look_at_orthonormal(rng):
    for _ in range(50):
        eye = rng.normal(size=3)
        target = rng.normal(size=3)
        if np.linalg.norm(eye - target) < 1e-3:
            continue
        fwd = normalize(target - eye)
        if np.linalg.norm(np.cross(fwd, [0, 0, 1])) < 1e-6:
            continue
        m = look_at(eye, target).matrix()
        assert np.abs(m.T @ m - np.eye(3)).max() < 1e-9


def test_look_at_degenerate():
    with pytest.raises(ValueError):
        look_at([1, 2, 3], [1, 2, 3])
    with pytest.raises(ValueError):
        look_at([0, 0, 1], [0, 0, 0])  # straight down, parallel to world up

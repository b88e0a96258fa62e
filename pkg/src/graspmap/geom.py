"""3D vector / quaternion / pose math used across the toolkit.

Conventions:
  - vectors are float64 numpy arrays of shape (3,)
  - quaternions are float64 numpy arrays of shape (4,), ordered (w, x, y, z)
  - world frame is Z-up with the ground plane at z = 0
  - camera frame is +Z forward, +X right, +Y down (image convention)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

UNIT_TOL = 1e-9


def vec3(x, y, z) -> np.ndarray:
    return np.array([x, y, z], dtype=np.float64)


def norm(v) -> float:
    v = np.asarray(v, dtype=np.float64)
    return float(np.sqrt(v @ v))


def normalize(v) -> np.ndarray:
    """Unit vector along v; raises on (near-)zero input."""
    v = np.asarray(v, dtype=np.float64)
    n = norm(v)
    if n < 1e-12:
        raise ValueError("cannot normalize a zero-length vector")
    return v / n


def is_unit(v, tol=1e-6) -> bool:
    return abs(norm(v) - 1.0) <= tol


# ---------------------------------------------------------------------------
# quaternions (w, x, y, z)
# ---------------------------------------------------------------------------

def quat_identity() -> np.ndarray:
    return np.array([1.0, 0.0, 0.0, 0.0])


def quat_normalize(q) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64)
    n = float(np.sqrt(q @ q))
    if n < 1e-12:
        raise ValueError("cannot normalize a zero quaternion")
    return q / n


def quat_multiply(a, b) -> np.ndarray:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ])


def quat_conjugate(q) -> np.ndarray:
    return np.array([q[0], -q[1], -q[2], -q[3]])


def quat_from_axis_angle(axis, angle: float) -> np.ndarray:
    axis = normalize(axis)
    h = 0.5 * angle
    return np.concatenate(([np.cos(h)], np.sin(h) * axis))


def matrix_from_quat(q) -> np.ndarray:
    """3x3 rotation matrix for a unit quaternion."""
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def quat_from_matrix(matrix) -> np.ndarray:
    """Unit quaternion for a rotation matrix (Shepperd's method, w >= 0)."""
    m = np.asarray(matrix, dtype=np.float64)
    tr = m[0, 0] + m[1, 1] + m[2, 2]
    if tr > 0.0:
        s = np.sqrt(tr + 1.0) * 2.0
        q = np.array([0.25 * s,
                      (m[2, 1] - m[1, 2]) / s,
                      (m[0, 2] - m[2, 0]) / s,
                      (m[1, 0] - m[0, 1]) / s])
    elif m[0, 0] >= m[1, 1] and m[0, 0] >= m[2, 2]:
        s = np.sqrt(1.0 + m[0, 0] - m[1, 1] - m[2, 2]) * 2.0
        q = np.array([(m[2, 1] - m[1, 2]) / s,
                      0.25 * s,
                      (m[0, 1] + m[1, 0]) / s,
                      (m[0, 2] + m[2, 0]) / s])
    elif m[1, 1] >= m[2, 2]:
        s = np.sqrt(1.0 + m[1, 1] - m[0, 0] - m[2, 2]) * 2.0
        q = np.array([(m[0, 2] - m[2, 0]) / s,
                      (m[0, 1] + m[1, 0]) / s,
                      0.25 * s,
                      (m[1, 2] + m[2, 1]) / s])
    else:
        s = np.sqrt(1.0 + m[2, 2] - m[0, 0] - m[1, 1]) * 2.0
        q = np.array([(m[1, 0] - m[0, 1]) / s,
                      (m[0, 2] + m[2, 0]) / s,
                      (m[1, 2] + m[2, 1]) / s,
                      0.25 * s])
    if q[0] < 0:
        q = -q
    return quat_normalize(q)


def quat_rotate(q, v) -> np.ndarray:
    """Rotate vector(s) v by unit quaternion q; v is (3,) or (N, 3)."""
    v = np.asarray(v, dtype=np.float64)
    m = matrix_from_quat(q)
    if v.ndim == 1:
        return m @ v
    return v @ m.T


def quat_from_euler_zyx(yaw: float, pitch: float, roll: float) -> np.ndarray:
    """Intrinsic Z-Y-X rotation (yaw about Z, then pitch about Y, then roll about X)."""
    qz = quat_from_axis_angle([0, 0, 1], yaw)
    qy = quat_from_axis_angle([0, 1, 0], pitch)
    qx = quat_from_axis_angle([1, 0, 0], roll)
    return quat_normalize(quat_multiply(quat_multiply(qz, qy), qx))


def euler_zyx_from_matrix(m) -> tuple[float, float, float]:
    """(yaw, pitch, roll) of an intrinsic Z-Y-X rotation matrix.

    At the gimbal singularity (|pitch| = pi/2) roll is set to 0 and the free
    angle is folded into yaw; the reconstructed rotation is still exact.
    """
    m = np.asarray(m, dtype=np.float64)
    sp = -m[2, 0]
    sp = min(1.0, max(-1.0, sp))
    pitch = float(np.arcsin(sp))
    if abs(sp) < 1.0 - 1e-12:
        yaw = float(np.arctan2(m[1, 0], m[0, 0]))
        roll = float(np.arctan2(m[2, 1], m[2, 2]))
    else:
        yaw = float(np.arctan2(-m[0, 1], m[1, 1]))
        roll = 0.0
    return yaw, pitch, roll


def euler_zyx_from_quat(q) -> tuple[float, float, float]:
    return euler_zyx_from_matrix(matrix_from_quat(q))


# ---------------------------------------------------------------------------
# rigid poses
# ---------------------------------------------------------------------------

@dataclass
class Pose:
    """Rigid transform: world_point = R(rotation) @ local_point + position."""

    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    rotation: np.ndarray = field(default_factory=quat_identity)

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=np.float64).reshape(3)
        self.rotation = quat_normalize(np.asarray(self.rotation, dtype=np.float64).reshape(4))

    def matrix(self) -> np.ndarray:
        return matrix_from_quat(self.rotation)

    def transform_point(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=np.float64)
        if p.ndim == 1:
            return self.matrix() @ p + self.position
        return p @ self.matrix().T + self.position

    def transform_direction(self, d) -> np.ndarray:
        return quat_rotate(self.rotation, d)

    def inverse_transform_point(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=np.float64)
        m = self.matrix()
        if p.ndim == 1:
            return m.T @ (p - self.position)
        return (p - self.position) @ m

    def inverse_transform_direction(self, d) -> np.ndarray:
        d = np.asarray(d, dtype=np.float64)
        m = self.matrix()
        if d.ndim == 1:
            return m.T @ d
        return d @ m

    def compose(self, other: "Pose") -> "Pose":
        """self applied after other: (self*other)(p) = self(other(p))."""
        return Pose(self.transform_point(other.position),
                    quat_multiply(self.rotation, other.rotation))

    def inverse(self) -> "Pose":
        qc = quat_conjugate(self.rotation)
        return Pose(-quat_rotate(qc, self.position), qc)

    def almost_equal(self, other: "Pose", tol=1e-9) -> bool:
        dq = min(np.linalg.norm(self.rotation - other.rotation),
                 np.linalg.norm(self.rotation + other.rotation))
        return bool(np.linalg.norm(self.position - other.position) < tol and dq < tol)


def look_at(eye, target, world_up=(0.0, 0.0, 1.0)) -> Pose:
    """Camera pose at `eye` looking toward `target`.

    Camera axes: +Z forward (toward target), +X right, +Y down, chosen so the
    image "up" direction agrees with `world_up` as closely as possible.
    """
    eye = np.asarray(eye, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    fwd = target - eye
    if norm(fwd) < 1e-12:
        raise ValueError("look_at: eye and target coincide")
    fwd = normalize(fwd)
    up = np.asarray(world_up, dtype=np.float64)
    if norm(np.cross(fwd, up)) < 1e-9:
        raise ValueError("look_at: view direction is parallel to world_up")
    right = normalize(np.cross(fwd, up))
    down = np.cross(fwd, right)
    rot = np.column_stack([right, down, fwd])
    return Pose(eye, quat_from_matrix(rot))

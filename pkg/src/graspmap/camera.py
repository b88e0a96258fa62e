"""Pinhole camera model: projection, back-projection and grid pose sampling.

Depth is planar depth (distance along the optical axis, not along the viewing
ray) everywhere in this package. Integer pixel (row i, col j) has continuous
image coordinates (u, v) = (j + 0.5, i + 0.5), so a principal point at
(width/2, height/2) is the exact image center.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .geom import Pose, look_at, vec3

PRNG_NAME = "numpy-pcg64"


@dataclass(frozen=True)
class Intrinsics:
    fx: float
    fy: float
    u0: float
    v0: float
    width: int
    height: int

    def __post_init__(self):
        if not (self.fx > 0 and self.fy > 0):
            raise ValidationError("focal lengths must be positive")
        if not (0 <= self.u0 < self.width and 0 <= self.v0 < self.height):
            raise ValidationError("principal point must lie inside the image")

    def to_dict(self) -> dict:
        return {"fx": self.fx, "fy": self.fy, "u0": self.u0, "v0": self.v0,
                "width": self.width, "height": self.height}

    @classmethod
    def from_dict(cls, d: dict) -> "Intrinsics":
        try:
            return cls(float(d["fx"]), float(d["fy"]), float(d["u0"]), float(d["v0"]),
                       int(d["width"]), int(d["height"]))
        except KeyError as exc:
            raise ValidationError(f"intrinsics JSON missing key {exc.args[0]!r}") from None

    def scaled(self, width: int, height: int) -> "Intrinsics":
        """Intrinsics for the same field of view at another resolution."""
        sx = width / self.width
        sy = height / self.height
        return Intrinsics(self.fx * sx, self.fy * sy, self.u0 * sx, self.v0 * sy,
                          width, height)


def spot_hand_intrinsics() -> Intrinsics:
    """The 480x640 gripper-camera intrinsics used throughout: fx = fy = 554.26,
    principal point (320, 240)."""
    return Intrinsics(554.26, 554.26, 320.0, 240.0, 640, 480)


def back_project(u: float, v: float, z: float, intr: Intrinsics) -> np.ndarray:
    """Camera-frame point for pixel (u, v) at planar depth z:
    ((u - u0) z / fx, (v - v0) z / fy, z)."""
    if not z > 0:
        raise ValidationError(f"invalid depth {z}; back-projection needs z > 0")
    return vec3((u - intr.u0) * z / intr.fx, (v - intr.v0) * z / intr.fy, z)


def back_project_many(uv: np.ndarray, z: np.ndarray, intr: Intrinsics) -> np.ndarray:
    uv = np.asarray(uv, dtype=np.float64).reshape(-1, 2)
    z = np.asarray(z, dtype=np.float64).reshape(-1)
    if np.any(z <= 0):
        raise ValidationError("invalid depth; back-projection needs z > 0")
    return np.column_stack([(uv[:, 0] - intr.u0) * z / intr.fx,
                            (uv[:, 1] - intr.v0) * z / intr.fy, z])


def project(p_cam, intr: Intrinsics) -> tuple[float, float, float]:
    """Pixel (u, v) and planar depth of a camera-frame point; z must be > 0."""
    p = np.asarray(p_cam, dtype=np.float64)
    if not p[2] > 0:
        raise ValidationError("cannot project a point at or behind the camera plane")
    u = intr.fx * p[0] / p[2] + intr.u0
    v = intr.fy * p[1] / p[2] + intr.v0
    return float(u), float(v), float(p[2])


@dataclass(frozen=True)
class CameraGridSpec:
    """Regular camera grid: x_count x z_count positions at fixed y, with a
    seeded uniform jitter applied to the look-at target of each view."""

    x_count: int = 100
    z_count: int = 10
    x_range: tuple = (-0.5, 0.5)
    z_range: tuple = (-0.5, 0.5)
    y_fixed: float = 0.5
    jitter_xy: tuple = (-0.03, 0.03)
    jitter_z: tuple = (0.0, 0.09)
    seed: int = 0

    def __post_init__(self):
        if self.x_count < 1 or self.z_count < 1:
            raise ValidationError("grid counts must be >= 1")
        for name in ("x_range", "z_range", "jitter_xy", "jitter_z"):
            lo, hi = getattr(self, name)
            if not lo <= hi:
                raise ValidationError(f"{name} must be ordered (min <= max)")

    def to_dict(self) -> dict:
        return {"x_count": self.x_count, "z_count": self.z_count,
                "x_range": list(self.x_range), "z_range": list(self.z_range),
                "y_fixed": self.y_fixed, "jitter_xy": list(self.jitter_xy),
                "jitter_z": list(self.jitter_z), "seed": self.seed}

    @classmethod
    def from_dict(cls, d: dict) -> "CameraGridSpec":
        kw = {k: d[k] for k in ("x_count", "z_count", "y_fixed", "seed") if k in d}
        for k in ("x_range", "z_range", "jitter_xy", "jitter_z"):
            if k in d:
                kw[k] = tuple(d[k])
        return cls(**kw)


def sample_camera_grid(spec: CameraGridSpec, target) -> list[Pose]:
    """Poses on the grid, row-major over (z_index, x_index).

    Positions are exactly the grid points (independent of the seed); only the
    look-at target jitter consumes the PRNG, drawn as (dx, dy, dz) per view in
    iteration order from a PCG64 generator.
    """
    target = np.asarray(target, dtype=np.float64)
    xs = np.linspace(spec.x_range[0], spec.x_range[1], spec.x_count) \
        if spec.x_count > 1 else np.array([0.5 * (spec.x_range[0] + spec.x_range[1])])
    zs = np.linspace(spec.z_range[0], spec.z_range[1], spec.z_count) \
        if spec.z_count > 1 else np.array([0.5 * (spec.z_range[0] + spec.z_range[1])])
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    poses = []
    for z in zs:
        for x in xs:
            eye = vec3(x, spec.y_fixed, z)
            dx = rng.uniform(spec.jitter_xy[0], spec.jitter_xy[1])
            dy = rng.uniform(spec.jitter_xy[0], spec.jitter_xy[1])
            dz = rng.uniform(spec.jitter_z[0], spec.jitter_z[1])
            poses.append(look_at(eye, target + vec3(dx, dy, dz)))
    return poses

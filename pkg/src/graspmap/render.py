"""Raycasting RGB-D renderer.

Each view carries the four per-pixel channels the labeling and prediction
stages consume: Lambertian RGB (headlight at the camera), planar depth,
segmentation ids and camera-frame face normals. Flat (per-face) normals are
used so the rendered geometry agrees exactly with the collision geometry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .camera import Intrinsics
from .errors import ValidationError
from .geom import Pose
from .raycast import GROUND_OBJECT_ID, AcceleratedScene, raycast_batch

# fixed per-object albedo palette, cycled by object_id; ground gets light gray
_PALETTE = np.array([
    [0.80, 0.33, 0.27],
    [0.29, 0.56, 0.85],
    [0.36, 0.72, 0.36],
    [0.85, 0.68, 0.29],
    [0.62, 0.44, 0.76],
    [0.32, 0.73, 0.70],
])
_GROUND_ALBEDO = np.array([0.72, 0.72, 0.72])


@dataclass
class ViewSample:
    """One rendered view; channels share H x W and a common support:
    depth > 0 <=> segmentation != 0 <=> normal != 0."""

    rgb: np.ndarray          # H x W x 3 in [0, 1]
    depth: np.ndarray        # H x W planar depth in m, 0 = background/invalid
    segmentation: np.ndarray  # H x W object ids, 0 = background
    normals: np.ndarray      # H x W x 3 camera-frame unit normals oriented
    #                          against the pixel's viewing ray, 0 = invalid
    camera_pose: Pose
    intrinsics: Intrinsics

    def validate(self):
        h, w = self.depth.shape
        if self.rgb.shape != (h, w, 3) or self.segmentation.shape != (h, w) \
                or self.normals.shape != (h, w, 3):
            raise ValidationError("view channels disagree on image size")
        if (h, w) != (self.intrinsics.height, self.intrinsics.width):
            raise ValidationError("view size does not match intrinsics")
        has_depth = self.depth > 0
        has_seg = self.segmentation != 0
        nlen = np.linalg.norm(self.normals, axis=2)
        has_nrm = nlen > 0
        if not (np.array_equal(has_depth, has_seg) and np.array_equal(has_depth, has_nrm)):
            raise ValidationError("depth/segmentation/normal support masks disagree")
        if has_nrm.any():
            if np.abs(nlen[has_nrm] - 1.0).max() > 1e-6:
                raise ValidationError("non-zero normals must be unit length")
            # camera-facing means facing the pixel's viewing ray; checking the
            # optical axis (n_z < 0) instead would wrongly reject grazing
            # surfaces such as a ground plane seen from an up-tilted camera
            dirs, _ = pixel_ray_directions(self.intrinsics)
            facing = np.einsum("ij,ij->i", self.normals.reshape(-1, 3),
                               dirs)[has_nrm.reshape(-1)]
            if facing.max() >= 1e-9:
                raise ValidationError("rendered normals must face the viewing ray")
        if self.rgb.min() < 0 or self.rgb.max() > 1:
            raise ValidationError("rgb values must lie in [0, 1]")
        return self

    @property
    def shape(self):
        return self.depth.shape


def pixel_ray_directions(intr: Intrinsics):
    """Unit ray directions through every pixel center, camera frame (H*W, 3),
    plus the z-components needed to convert ray length to planar depth."""
    u = (np.arange(intr.width) + 0.5 - intr.u0) / intr.fx
    v = (np.arange(intr.height) + 0.5 - intr.v0) / intr.fy
    uu, vv = np.meshgrid(u, v)
    d = np.stack([uu, vv, np.ones_like(uu)], axis=-1).reshape(-1, 3)
    inv_len = 1.0 / np.linalg.norm(d, axis=1)
    return d * inv_len[:, None], inv_len


def object_albedo(object_id: int) -> np.ndarray:
    if object_id == GROUND_OBJECT_ID:
        return _GROUND_ALBEDO
    return _PALETTE[(object_id - 1) % len(_PALETTE)]


def render_view(scene: AcceleratedScene, pose: Pose, intr: Intrinsics) -> ViewSample:
    """Render one view: a single primary ray through each pixel center."""
    h, w = intr.height, intr.width
    dirs_cam, dir_z = pixel_ray_directions(intr)
    rot = pose.matrix()
    dirs_world = dirs_cam @ rot.T
    origins = np.broadcast_to(pose.position, dirs_world.shape)

    t, obj, _local, normals_world = raycast_batch(scene, origins, dirs_world)
    hit = np.isfinite(t)

    depth = np.zeros(h * w)
    depth[hit] = t[hit] * dir_z[hit]
    seg = np.zeros(h * w, dtype=np.int32)
    seg[hit] = obj[hit]

    normals_cam = np.zeros((h * w, 3))
    normals_cam[hit] = normals_world[hit] @ rot

    rgb = np.zeros((h * w, 3))
    if hit.any():
        lambert = -np.einsum("ij,ij->i", normals_world[hit], dirs_world[hit])
        lambert = np.clip(lambert, 0.0, 1.0)
        albedo = np.empty((int(hit.sum()), 3))
        for oid in np.unique(obj[hit]):
            albedo[obj[hit] == oid] = object_albedo(int(oid))
        rgb[hit] = albedo * lambert[:, None]

    view = ViewSample(rgb.reshape(h, w, 3), depth.reshape(h, w), seg.reshape(h, w),
                      normals_cam.reshape(h, w, 3), pose, intr)
    return view.validate()

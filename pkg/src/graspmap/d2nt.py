"""Depth-to-normal translation from depth gradients and camera intrinsics.

Basic closed-form variant: with planar depth z(u, v) and central-difference
gradients g_u, g_v, the (unnormalized) camera-frame normal at a pixel is

    n ~ (fx * g_u,  fy * g_v,  -(z + (u - u0) * g_u + (v - v0) * g_v))

normalized to unit length and oriented camera-facing (n_z < 0). Pixels whose
central stencil touches invalid depth or the image border are marked invalid
(zero vector) rather than extrapolated; no smoothing is applied. The variant
name is recorded in dataset manifests as "d2nt-basic/central".
"""

from __future__ import annotations

import numpy as np

from .camera import Intrinsics
from .errors import ValidationError

VARIANT = "d2nt-basic/central"


def depth_to_normals(depth: np.ndarray, intr: Intrinsics) -> np.ndarray:
    """Camera-frame unit normal map (H x W x 3) from a planar-depth map.

    Invalid depth pixels (0) and pixels without a full valid central stencil
    produce the zero vector.
    """
    depth = np.asarray(depth, dtype=np.float64)
    if depth.shape != (intr.height, intr.width):
        raise ValidationError(
            f"depth shape {depth.shape} does not match intrinsics "
            f"{(intr.height, intr.width)}")
    h, w = depth.shape
    valid = depth > 0

    normals = np.zeros((h, w, 3))
    if h < 3 or w < 3 or not valid.any():
        return normals

    # full central stencil: the pixel and its 4 neighbors valid, not on border
    ok = np.zeros((h, w), dtype=bool)
    ok[1:-1, 1:-1] = (valid[1:-1, 1:-1] & valid[1:-1, :-2] & valid[1:-1, 2:]
                      & valid[:-2, 1:-1] & valid[2:, 1:-1])
    if not ok.any():
        return normals

    g_u = np.zeros((h, w))
    g_v = np.zeros((h, w))
    g_u[1:-1, 1:-1] = (depth[1:-1, 2:] - depth[1:-1, :-2]) * 0.5
    g_v[1:-1, 1:-1] = (depth[2:, 1:-1] - depth[:-2, 1:-1]) * 0.5

    uu = np.arange(w) + 0.5 - intr.u0
    vv = np.arange(h) + 0.5 - intr.v0
    nx = intr.fx * g_u
    ny = intr.fy * g_v
    nz = -(depth + uu[None, :] * g_u + vv[:, None] * g_v)

    n = np.stack([nx, ny, nz], axis=-1)
    length = np.linalg.norm(n, axis=2)
    ok &= length > 1e-12
    # orient camera-facing; a normal with n_z exactly 0 cannot face the camera
    flip = n[..., 2] > 0
    n[flip] = -n[flip]
    ok &= n[..., 2] < 0
    normals[ok] = n[ok] / length[ok][:, None]
    return normals

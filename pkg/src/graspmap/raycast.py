"""Immutable triangle scenes with BVH-accelerated ray casting.

The BVH is a binned median-split tree (leaf size <= 4) flattened into numpy
arrays and traversed by numba kernels; a pure-numpy exhaustive intersector is
kept alongside as the correctness oracle. Triangle intersection is
Moller-Trumbore in double precision with a 1e-12 determinant cutoff and
inclusive barycentric bounds so shared edges cannot open holes. Both paths
break distance ties toward the lower global triangle index.

The ground plane (world z = 0) is analytic, not a mesh; its hits carry the
sentinel object id GROUND_OBJECT_ID.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numba
from numba import njit, prange

# the portable threading layer is plenty for the 2-8 core targets this runs on
# and avoids the noisy TBB version probe
numba.config.THREADING_LAYER = "workqueue"

from .errors import ValidationError
from .geom import Pose, normalize
from .mesh import TriangleMesh

GROUND_OBJECT_ID = 65535

_DET_EPS = 1e-12
_T_EPS = 1e-12
_LEAF_SIZE = 4
# fixed oblique direction for point-in-mesh parity tests (avoids axis-aligned
# edge degeneracies of generated meshes)
PARITY_DIRECTION = np.array([0.12813371, 0.74620459, 0.65322973])
PARITY_DIRECTION = PARITY_DIRECTION / np.linalg.norm(PARITY_DIRECTION)


@dataclass
class Scene:
    """Rigid objects (mesh + pose) plus an optional analytic ground plane."""

    objects: list = field(default_factory=list)  # list[(TriangleMesh, Pose)]
    ground_plane: bool = True

    def add(self, mesh: TriangleMesh, pose: Pose | None = None):
        self.objects.append((mesh, pose if pose is not None else Pose()))
        return self


class AcceleratedScene:
    """World-space triangle soup + BVH, immutable once built."""

    def __init__(self, scene: Scene):
        if not scene.objects and not scene.ground_plane:
            raise ValidationError("cannot accelerate an empty scene")
        ids = [m.object_id for m, _ in scene.objects]
        if len(set(ids)) != len(ids):
            raise ValidationError("scene object_ids must be unique")
        if GROUND_OBJECT_ID in ids or 0 in ids or any(i < 0 for i in ids):
            raise ValidationError(
                f"object_ids must be positive and != {GROUND_OBJECT_ID} (ground sentinel)")

        v0s, e1s, e2s, objs, locs = [], [], [], [], []
        self.object_slices: dict[int, tuple[int, int]] = {}
        start = 0
        for mesh, pose in scene.objects:
            wv = pose.transform_point(mesh.vertices)
            f = mesh.faces
            a = wv[f[:, 0]]
            v0s.append(a)
            e1s.append(wv[f[:, 1]] - a)
            e2s.append(wv[f[:, 2]] - a)
            objs.append(np.full(len(f), mesh.object_id, dtype=np.int32))
            locs.append(np.arange(len(f), dtype=np.int32))
            self.object_slices[mesh.object_id] = (start, start + len(f))
            start += len(f)

        if start == 0:
            # ground-only scene: keep empty arrays, BVH is a stub
            self.tri_v0 = np.zeros((0, 3))
            self.tri_e1 = np.zeros((0, 3))
            self.tri_e2 = np.zeros((0, 3))
            self.tri_obj = np.zeros(0, dtype=np.int32)
            self.tri_local = np.zeros(0, dtype=np.int32)
        else:
            self.tri_v0 = np.ascontiguousarray(np.concatenate(v0s))
            self.tri_e1 = np.ascontiguousarray(np.concatenate(e1s))
            self.tri_e2 = np.ascontiguousarray(np.concatenate(e2s))
            self.tri_obj = np.concatenate(objs)
            self.tri_local = np.concatenate(locs)

        (self.node_min, self.node_max, self.node_left,
         self.node_count, self.tri_order) = _build_bvh(self.tri_v0, self.tri_e1, self.tri_e2)
        self.has_ground = bool(scene.ground_plane)
        self.meshes = [m for m, _ in scene.objects]
        for arr in (self.tri_v0, self.tri_e1, self.tri_e2, self.tri_obj, self.tri_local,
                    self.node_min, self.node_max, self.node_left, self.node_count,
                    self.tri_order):
            arr.setflags(write=False)

    @property
    def num_triangles(self) -> int:
        return len(self.tri_v0)


def build_bvh(scene: Scene) -> AcceleratedScene:
    return AcceleratedScene(scene)


def _build_bvh(v0, e1, e2):
    m = len(v0)
    if m == 0:
        return (np.zeros((1, 3)), np.zeros((1, 3)),
                np.zeros(1, dtype=np.int32), np.zeros(1, dtype=np.int32),
                np.zeros(0, dtype=np.int32))
    p1 = v0 + e1
    p2 = v0 + e2
    tmin = np.minimum(np.minimum(v0, p1), p2) - 1e-9
    tmax = np.maximum(np.maximum(v0, p1), p2) + 1e-9
    cent = (tmin + tmax) * 0.5

    cap = 2 * m + 2
    nmin = np.empty((cap, 3))
    nmax = np.empty((cap, 3))
    left = np.zeros(cap, dtype=np.int32)
    count = np.zeros(cap, dtype=np.int32)
    order = np.arange(m, dtype=np.int32)

    n_nodes = 1
    stack = [(0, 0, m)]
    while stack:
        ni, s, e = stack.pop()
        ids = order[s:e]
        nmin[ni] = tmin[ids].min(axis=0)
        nmax[ni] = tmax[ids].max(axis=0)
        c = cent[ids]
        spread = c.max(axis=0) - c.min(axis=0)
        axis = int(np.argmax(spread))
        if e - s <= _LEAF_SIZE or spread[axis] < 1e-12:
            left[ni] = s
            count[ni] = e - s
            continue
        mid = (e - s) // 2
        part = np.argpartition(c[:, axis], mid)
        order[s:e] = ids[part]
        li = n_nodes
        n_nodes += 2
        left[ni] = li
        count[ni] = 0
        stack.append((li + 1, s + mid, e))
        stack.append((li, s, s + mid))
    return (np.ascontiguousarray(nmin[:n_nodes]), np.ascontiguousarray(nmax[:n_nodes]),
            left[:n_nodes].copy(), count[:n_nodes].copy(), order)


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------

@njit(cache=True, fastmath=False)
def _tri_hit(ox, oy, oz, dx, dy, dz, v0, e1, e2, k):
    """Moller-Trumbore; returns t > 0 or -1.0 for a miss."""
    e1x, e1y, e1z = e1[k, 0], e1[k, 1], e1[k, 2]
    e2x, e2y, e2z = e2[k, 0], e2[k, 1], e2[k, 2]
    px = dy * e2z - dz * e2y
    py = dz * e2x - dx * e2z
    pz = dx * e2y - dy * e2x
    det = e1x * px + e1y * py + e1z * pz
    if det > -_DET_EPS and det < _DET_EPS:
        return -1.0
    inv = 1.0 / det
    tx = ox - v0[k, 0]
    ty = oy - v0[k, 1]
    tz = oz - v0[k, 2]
    u = (tx * px + ty * py + tz * pz) * inv
    if u < 0.0 or u > 1.0:
        return -1.0
    qx = ty * e1z - tz * e1y
    qy = tz * e1x - tx * e1z
    qz = tx * e1y - ty * e1x
    v = (dx * qx + dy * qy + dz * qz) * inv
    if v < 0.0 or u + v > 1.0:
        return -1.0
    t = (e2x * qx + e2y * qy + e2z * qz) * inv
    if t <= _T_EPS:
        return -1.0
    return t


@njit(cache=True, parallel=True, fastmath=False)
def _raycast_kernel(origins, dirs, nmin, nmax, left, count, order, v0, e1, e2,
                    out_t, out_tri):
    n_rays = origins.shape[0]
    for r in prange(n_rays):
        ox, oy, oz = origins[r, 0], origins[r, 1], origins[r, 2]
        dx, dy, dz = dirs[r, 0], dirs[r, 1], dirs[r, 2]
        sdx = dx if (dx > 1e-12 or dx < -1e-12) else (1e-12 if dx >= 0 else -1e-12)
        sdy = dy if (dy > 1e-12 or dy < -1e-12) else (1e-12 if dy >= 0 else -1e-12)
        sdz = dz if (dz > 1e-12 or dz < -1e-12) else (1e-12 if dz >= 0 else -1e-12)
        ivx, ivy, ivz = 1.0 / sdx, 1.0 / sdy, 1.0 / sdz
        best_t = np.inf
        best_tri = -1
        stack = np.empty(64, dtype=np.int32)
        sp = 0
        stack[0] = 0
        sp = 1
        while sp > 0:
            sp -= 1
            ni = stack[sp]
            t1 = (nmin[ni, 0] - ox) * ivx
            t2 = (nmax[ni, 0] - ox) * ivx
            tn = min(t1, t2)
            tf = max(t1, t2)
            t1 = (nmin[ni, 1] - oy) * ivy
            t2 = (nmax[ni, 1] - oy) * ivy
            tn = max(tn, min(t1, t2))
            tf = min(tf, max(t1, t2))
            t1 = (nmin[ni, 2] - oz) * ivz
            t2 = (nmax[ni, 2] - oz) * ivz
            tn = max(tn, min(t1, t2))
            tf = min(tf, max(t1, t2))
            if tf < tn or tf < 0.0 or tn > best_t:
                continue
            c = count[ni]
            if c > 0:
                s = left[ni]
                for k in range(s, s + c):
                    tri = order[k]
                    t = _tri_hit(ox, oy, oz, dx, dy, dz, v0, e1, e2, tri)
                    if t > 0.0 and (t < best_t or (t == best_t and tri < best_tri)):
                        best_t = t
                        best_tri = tri
            else:
                stack[sp] = left[ni]
                stack[sp + 1] = left[ni] + 1
                sp += 2
        out_t[r] = best_t
        out_tri[r] = best_tri


@njit(cache=True, parallel=True, fastmath=False)
def _parity_kernel(points, direction, v0, e1, e2, start, end, out_inside):
    """Odd crossing count along a fixed direction => point inside the mesh slice."""
    dx, dy, dz = direction[0], direction[1], direction[2]
    for p in prange(points.shape[0]):
        ox, oy, oz = points[p, 0], points[p, 1], points[p, 2]
        crossings = 0
        for k in range(start, end):
            t = _tri_hit(ox, oy, oz, dx, dy, dz, v0, e1, e2, k)
            if t > 0.0:
                crossings += 1
        out_inside[p] = crossings & 1


@njit(cache=True, fastmath=False)
def _axis_separates(p0, p1, p2, r):
    mn = min(p0, min(p1, p2))
    mx = max(p0, max(p1, p2))
    return mn >= r or mx <= -r


@njit(cache=True, fastmath=False)
def _tri_overlaps_box(u0, u1, u2, hx, hy, hz):
    """Akenine-Moller triangle vs axis-aligned box test in the box frame.

    u0/u1/u2 are triangle vertices relative to the box center; touching
    contact does not count as overlap (callers pre-shrink the box by the
    penetration tolerance).
    """
    # box-axis tests
    for a in range(3):
        mn = min(u0[a], min(u1[a], u2[a]))
        mx = max(u0[a], max(u1[a], u2[a]))
        h = hx if a == 0 else (hy if a == 1 else hz)
        if mn >= h or mx <= -h:
            return False
    f0 = (u1[0] - u0[0], u1[1] - u0[1], u1[2] - u0[2])
    f1 = (u2[0] - u1[0], u2[1] - u1[1], u2[2] - u1[2])
    f2 = (u0[0] - u2[0], u0[1] - u2[1], u0[2] - u2[2])
    for ei in range(3):
        f = f0 if ei == 0 else (f1 if ei == 1 else f2)
        # axis = X x f
        ax, ay, az = 0.0, -f[2], f[1]
        r = hy * abs(az) + hz * abs(ay)
        if _axis_separates(u0[1] * ay + u0[2] * az, u1[1] * ay + u1[2] * az,
                           u2[1] * ay + u2[2] * az, r):
            return False
        # axis = Y x f
        ax, ay, az = f[2], 0.0, -f[0]
        r = hx * abs(az) + hz * abs(ax)
        if _axis_separates(u0[0] * ax + u0[2] * az, u1[0] * ax + u1[2] * az,
                           u2[0] * ax + u2[2] * az, r):
            return False
        # axis = Z x f
        ax, ay, az = -f[1], f[0], 0.0
        r = hx * abs(ay) + hy * abs(ax)
        if _axis_separates(u0[0] * ax + u0[1] * ay, u1[0] * ax + u1[1] * ay,
                           u2[0] * ax + u2[1] * ay, r):
            return False
    # triangle plane test
    nx = f0[1] * f1[2] - f0[2] * f1[1]
    ny = f0[2] * f1[0] - f0[0] * f1[2]
    nz = f0[0] * f1[1] - f0[1] * f1[0]
    r = hx * abs(nx) + hy * abs(ny) + hz * abs(nz)
    d = nx * u0[0] + ny * u0[1] + nz * u0[2]
    if d >= r or d <= -r:
        return False
    return True


@njit(cache=True, parallel=True, fastmath=False)
def _obb_collision_kernel(centers, axes, halfext, nmin, nmax, left, count, order,
                          v0, e1, e2, out_hit):
    """For each oriented box, test overlap against every triangle via the BVH."""
    n_boxes = centers.shape[0]
    for b in prange(n_boxes):
        cx, cy, cz = centers[b, 0], centers[b, 1], centers[b, 2]
        hx, hy, hz = halfext[b, 0], halfext[b, 1], halfext[b, 2]
        # world AABB of the OBB
        rx = abs(axes[b, 0, 0]) * hx + abs(axes[b, 1, 0]) * hy + abs(axes[b, 2, 0]) * hz
        ry = abs(axes[b, 0, 1]) * hx + abs(axes[b, 1, 1]) * hy + abs(axes[b, 2, 1]) * hz
        rz = abs(axes[b, 0, 2]) * hx + abs(axes[b, 1, 2]) * hy + abs(axes[b, 2, 2]) * hz
        qminx, qmaxx = cx - rx, cx + rx
        qminy, qmaxy = cy - ry, cy + ry
        qminz, qmaxz = cz - rz, cz + rz
        hit = False
        stack = np.empty(64, dtype=np.int32)
        sp = 1
        stack[0] = 0
        u0 = np.empty(3)
        u1 = np.empty(3)
        u2 = np.empty(3)
        while sp > 0 and not hit:
            sp -= 1
            ni = stack[sp]
            if (nmin[ni, 0] > qmaxx or nmax[ni, 0] < qminx or
                    nmin[ni, 1] > qmaxy or nmax[ni, 1] < qminy or
                    nmin[ni, 2] > qmaxz or nmax[ni, 2] < qminz):
                continue
            c = count[ni]
            if c > 0:
                s = left[ni]
                for k in range(s, s + c):
                    tri = order[k]
                    for j in range(3):
                        wx = v0[tri, 0] - cx
                        wy = v0[tri, 1] - cy
                        wz = v0[tri, 2] - cz
                        if j == 1:
                            wx += e1[tri, 0]
                            wy += e1[tri, 1]
                            wz += e1[tri, 2]
                        elif j == 2:
                            wx += e2[tri, 0]
                            wy += e2[tri, 1]
                            wz += e2[tri, 2]
                        ux = wx * axes[b, 0, 0] + wy * axes[b, 0, 1] + wz * axes[b, 0, 2]
                        uy = wx * axes[b, 1, 0] + wy * axes[b, 1, 1] + wz * axes[b, 1, 2]
                        uz = wx * axes[b, 2, 0] + wy * axes[b, 2, 1] + wz * axes[b, 2, 2]
                        if j == 0:
                            u0[0], u0[1], u0[2] = ux, uy, uz
                        elif j == 1:
                            u1[0], u1[1], u1[2] = ux, uy, uz
                        else:
                            u2[0], u2[1], u2[2] = ux, uy, uz
                    if _tri_overlaps_box(u0, u1, u2, hx, hy, hz):
                        hit = True
                        break
            else:
                stack[sp] = left[ni]
                stack[sp + 1] = left[ni] + 1
                sp += 2
        out_hit[b] = hit


# ---------------------------------------------------------------------------
# public ray casting API
# ---------------------------------------------------------------------------

@dataclass
class RayHit:
    t: float
    point: np.ndarray
    face_normal: np.ndarray
    object_id: int
    triangle_index: int


def _ground_t(origins, dirs):
    """Positive hit distance to the z = 0 plane, inf when absent."""
    dz = dirs[:, 2]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(np.abs(dz) > _DET_EPS, -origins[:, 2] / dz, np.inf)
    t = np.where(t > _T_EPS, t, np.inf)
    return t


def raycast_batch(scene: AcceleratedScene, origins, dirs):
    """Nearest hits for a batch of rays.

    Returns (t, object_id, triangle_index, normals): t = inf and object_id = 0
    where nothing is hit; normals are unit, world frame, oriented against the
    ray. On an exact mesh/ground distance tie the mesh hit wins.
    """
    origins = np.ascontiguousarray(origins, dtype=np.float64).reshape(-1, 3)
    dirs = np.ascontiguousarray(dirs, dtype=np.float64).reshape(-1, 3)
    n = len(origins)
    t = np.full(n, np.inf)
    tri = np.full(n, -1, dtype=np.int64)
    if scene.num_triangles:
        _raycast_kernel(origins, dirs, scene.node_min, scene.node_max,
                        scene.node_left, scene.node_count, scene.tri_order,
                        scene.tri_v0, scene.tri_e1, scene.tri_e2, t, tri)
    obj = np.zeros(n, dtype=np.int32)
    hit_mesh = tri >= 0
    obj[hit_mesh] = scene.tri_obj[tri[hit_mesh]]
    local = np.full(n, -1, dtype=np.int64)
    local[hit_mesh] = scene.tri_local[tri[hit_mesh]]

    normals = np.zeros((n, 3))
    if hit_mesh.any():
        nrm = np.cross(scene.tri_e1[tri[hit_mesh]], scene.tri_e2[tri[hit_mesh]])
        nrm /= np.linalg.norm(nrm, axis=1, keepdims=True)
        flip = np.einsum("ij,ij->i", nrm, dirs[hit_mesh]) > 0
        nrm[flip] = -nrm[flip]
        normals[hit_mesh] = nrm

    if scene.has_ground:
        tg = _ground_t(origins, dirs)
        ground_wins = tg < t
        if ground_wins.any():
            t = np.where(ground_wins, tg, t)
            obj[ground_wins] = GROUND_OBJECT_ID
            local[ground_wins] = -1
            gn = np.where(dirs[ground_wins, 2:3] < 0, 1.0, -1.0)
            normals[ground_wins] = 0.0
            normals[ground_wins, 2] = gn[:, 0]
    return t, obj, local, normals


def raycast(scene: AcceleratedScene, origin, direction):
    """Nearest intersection of a single ray, or None."""
    direction = np.asarray(direction, dtype=np.float64)
    if abs(np.linalg.norm(direction) - 1.0) > 1e-6:
        raise ValidationError("ray direction must be unit length")
    t, obj, local, normals = raycast_batch(scene, np.asarray(origin)[None, :],
                                           direction[None, :])
    if not np.isfinite(t[0]):
        return None
    origin = np.asarray(origin, dtype=np.float64)
    return RayHit(float(t[0]), origin + t[0] * direction, normals[0],
                  int(obj[0]), int(local[0]))


def raycast_batch_brute(scene: AcceleratedScene, origins, dirs):
    """Exhaustive per-triangle intersection; the oracle for BVH equivalence.

    Mirrors the kernel's arithmetic (same formula, same epsilons, same
    lower-index tie-break) without touching the BVH.
    """
    origins = np.asarray(origins, dtype=np.float64).reshape(-1, 3)
    dirs = np.asarray(dirs, dtype=np.float64).reshape(-1, 3)
    n = len(origins)
    m = scene.num_triangles
    best_t = np.full(n, np.inf)
    best_tri = np.full(n, -1, dtype=np.int64)
    if m:
        v0, e1, e2 = scene.tri_v0, scene.tri_e1, scene.tri_e2
        chunk = max(1, int(4e6) // max(m, 1))
        for s in range(0, n, chunk):
            o = origins[s:s + chunk][:, None, :]
            d = dirs[s:s + chunk][:, None, :]
            p = np.cross(d, e2[None, :, :])
            det = np.einsum("rmk,mk->rm", p, e1)
            with np.errstate(divide="ignore", invalid="ignore"):
                inv = np.where(np.abs(det) >= _DET_EPS, 1.0 / det, 0.0)
            tv = o - v0[None, :, :]
            u = np.einsum("rmk,rmk->rm", tv, p) * inv
            q = np.cross(tv, e1[None, :, :])
            v = np.einsum("rmk,rk->rm", q, dirs[s:s + chunk]) * inv
            t = np.einsum("rmk,mk->rm", q, e2) * inv
            ok = ((np.abs(det) >= _DET_EPS) & (u >= 0.0) & (u <= 1.0)
                  & (v >= 0.0) & (u + v <= 1.0) & (t > _T_EPS))
            t = np.where(ok, t, np.inf)
            idx = np.argmin(t, axis=1)  # first minimum = lowest triangle index
            rows = np.arange(len(idx))
            tmin = t[rows, idx]
            hit = np.isfinite(tmin)
            best_t[s:s + chunk] = tmin
            best_tri[s:s + chunk][hit] = idx[hit]

    obj = np.zeros(n, dtype=np.int32)
    local = np.full(n, -1, dtype=np.int64)
    hit_mesh = best_tri >= 0
    obj[hit_mesh] = scene.tri_obj[best_tri[hit_mesh]]
    local[hit_mesh] = scene.tri_local[best_tri[hit_mesh]]
    normals = np.zeros((n, 3))
    if hit_mesh.any():
        nrm = np.cross(scene.tri_e1[best_tri[hit_mesh]], scene.tri_e2[best_tri[hit_mesh]])
        nrm /= np.linalg.norm(nrm, axis=1, keepdims=True)
        flip = np.einsum("ij,ij->i", nrm, dirs[hit_mesh]) > 0
        nrm[flip] = -nrm[flip]
        normals[hit_mesh] = nrm
    if scene.has_ground:
        tg = _ground_t(origins, dirs)
        ground_wins = tg < best_t
        if ground_wins.any():
            best_t = np.where(ground_wins, tg, best_t)
            obj[ground_wins] = GROUND_OBJECT_ID
            local[ground_wins] = -1
            gn = np.where(dirs[ground_wins, 2:3] < 0, 1.0, -1.0)
            normals[ground_wins] = 0.0
            normals[ground_wins, 2] = gn[:, 0]
    return best_t, obj, local, normals


def points_in_mesh(scene: AcceleratedScene, points, object_id: int) -> np.ndarray:
    """Parity (crossing-count) inside test against one object's triangles."""
    if object_id not in scene.object_slices:
        raise ValidationError(f"object {object_id} not in scene")
    s, e = scene.object_slices[object_id]
    points = np.ascontiguousarray(points, dtype=np.float64).reshape(-1, 3)
    out = np.zeros(len(points), dtype=np.uint8)
    if e > s and len(points):
        _parity_kernel(points, PARITY_DIRECTION, scene.tri_v0, scene.tri_e1,
                       scene.tri_e2, s, e, out)
    return out.astype(bool)


def obbs_intersect_meshes(scene: AcceleratedScene, centers, axes, halfext) -> np.ndarray:
    """True per box when the oriented box overlaps any scene triangle.

    axes[b] rows are the box's unit axes in world coordinates; halfext may be
    pre-shrunk by a penetration tolerance by the caller. Touching contact is
    not an overlap.
    """
    centers = np.ascontiguousarray(centers, dtype=np.float64).reshape(-1, 3)
    axes = np.ascontiguousarray(axes, dtype=np.float64).reshape(-1, 3, 3)
    halfext = np.ascontiguousarray(np.maximum(halfext, 0.0),
                                   dtype=np.float64).reshape(-1, 3)
    out = np.zeros(len(centers), dtype=np.uint8)
    if scene.num_triangles and len(centers):
        _obb_collision_kernel(centers, axes, halfext, scene.node_min, scene.node_max,
                              scene.node_left, scene.node_count, scene.tri_order,
                              scene.tri_v0, scene.tri_e1, scene.tri_e2, out)
    return out.astype(bool)


def warmup_kernels():
    """Force JIT compilation of every kernel on a one-triangle scene."""
    m = TriangleMesh(np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]], dtype=float),
                     np.array([[0, 1, 2]]), object_id=1)
    acc = AcceleratedScene(Scene([(m, Pose())], ground_plane=True))
    o = np.array([[0.2, 0.2, 1.0]])
    d = np.array([[0.0, 0.0, -1.0]])
    raycast_batch(acc, o, d)
    points_in_mesh(acc, o, 1)
    obbs_intersect_meshes(acc, o, np.eye(3)[None], np.full((1, 3), 0.1))

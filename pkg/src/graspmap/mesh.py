"""Triangle meshes, primitive generators and Wavefront OBJ loading."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError


@dataclass
class TriangleMesh:
    """Indexed triangle mesh in its local frame.

    vertices: (N, 3) float64, faces: (M, 3) int32 vertex indices,
    object_id: positive integer identity used in segmentation masks.
    """

    vertices: np.ndarray
    faces: np.ndarray
    object_id: int = 1

    def __post_init__(self):
        self.vertices = np.ascontiguousarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        self.faces = np.ascontiguousarray(self.faces, dtype=np.int32).reshape(-1, 3)
        if not np.all(np.isfinite(self.vertices)):
            raise ValidationError("mesh has non-finite vertices")
        if len(self.faces) and (self.faces.min() < 0 or self.faces.max() >= len(self.vertices)):
            raise ValidationError("mesh face index out of range")
        areas = triangle_areas(self.vertices, self.faces)
        if np.any(areas <= 0.0):
            raise ValidationError("mesh contains degenerate (zero-area) triangles")

    @property
    def num_triangles(self) -> int:
        return len(self.faces)


def triangle_areas(vertices, faces) -> np.ndarray:
    v0 = vertices[faces[:, 0]]
    e1 = vertices[faces[:, 1]] - v0
    e2 = vertices[faces[:, 2]] - v0
    return 0.5 * np.linalg.norm(np.cross(e1, e2), axis=1)


def surface_area(mesh: TriangleMesh) -> float:
    return float(triangle_areas(mesh.vertices, mesh.faces).sum())


def _edge_counts(faces):
    e = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
    e = np.sort(e, axis=1)
    _, counts = np.unique(e, axis=0, return_counts=True)
    return counts


def euler_characteristic(mesh: TriangleMesh) -> int:
    """V - E + F with E counted over unique undirected edges."""
    e = np.concatenate([mesh.faces[:, [0, 1]], mesh.faces[:, [1, 2]], mesh.faces[:, [2, 0]]])
    e = np.sort(e, axis=1)
    n_edges = len(np.unique(e, axis=0))
    return len(mesh.vertices) - n_edges + len(mesh.faces)


def is_watertight(mesh: TriangleMesh) -> bool:
    """True when every undirected edge is shared by exactly two triangles."""
    counts = _edge_counts(mesh.faces)
    return bool(len(counts) and np.all(counts == 2))


# ---------------------------------------------------------------------------
# primitives (all centered at the local origin)
# ---------------------------------------------------------------------------

def make_sphere(radius: float, tessellation: int = 32, object_id: int = 1) -> TriangleMesh:
    """UV sphere: `tessellation` segments around the equator."""
    _check_dims(radius=radius)
    _check_tess(tessellation)
    n = int(tessellation)
    stacks = max(2, n // 2)
    verts = [(0.0, 0.0, radius)]
    for i in range(1, stacks):
        phi = np.pi * i / stacks
        z = radius * np.cos(phi)
        r = radius * np.sin(phi)
        for j in range(n):
            th = 2 * np.pi * j / n
            verts.append((r * np.cos(th), r * np.sin(th), z))
    verts.append((0.0, 0.0, -radius))
    top, bottom = 0, len(verts) - 1
    ring = lambda i: 1 + (i - 1) * n  # noqa: E731 - first vertex of ring i (1-based)
    faces = []
    for j in range(n):
        faces.append((top, ring(1) + j, ring(1) + (j + 1) % n))
    for i in range(1, stacks - 1):
        a, b = ring(i), ring(i + 1)
        for j in range(n):
            j2 = (j + 1) % n
            faces.append((a + j, b + j, b + j2))
            faces.append((a + j, b + j2, a + j2))
    for j in range(n):
        a = ring(stacks - 1)
        faces.append((bottom, a + (j + 1) % n, a + j))
    return TriangleMesh(np.array(verts), np.array(faces), object_id)


def make_cylinder(radius: float, height: float, tessellation: int = 32,
                  object_id: int = 1) -> TriangleMesh:
    """Closed cylinder, axis +Z, spanning z in [-height/2, height/2]."""
    _check_dims(radius=radius, height=height)
    _check_tess(tessellation)
    n = int(tessellation)
    hz = height / 2.0
    ang = 2 * np.pi * np.arange(n) / n
    ring = np.column_stack([radius * np.cos(ang), radius * np.sin(ang)])
    verts = [(0.0, 0.0, hz)]
    verts += [(x, y, hz) for x, y in ring]
    verts += [(x, y, -hz) for x, y in ring]
    verts.append((0.0, 0.0, -hz))
    topc, botc = 0, len(verts) - 1
    t0, b0 = 1, 1 + n
    faces = []
    for j in range(n):
        j2 = (j + 1) % n
        faces.append((topc, t0 + j, t0 + j2))
        faces.append((botc, b0 + j2, b0 + j))
        faces.append((t0 + j, b0 + j, b0 + j2))
        faces.append((t0 + j, b0 + j2, t0 + j2))
    return TriangleMesh(np.array(verts), np.array(faces), object_id)


def make_box(size_x: float, size_y: float, size_z: float, object_id: int = 1) -> TriangleMesh:
    _check_dims(size_x=size_x, size_y=size_y, size_z=size_z)
    hx, hy, hz = size_x / 2.0, size_y / 2.0, size_z / 2.0
    verts = np.array([(sx * hx, sy * hy, sz * hz)
                      for sz in (-1, 1) for sy in (-1, 1) for sx in (-1, 1)], dtype=np.float64)
    # vertex bits: x -> 1, y -> 2, z -> 4
    quads = [
        (0, 2, 3, 1),  # z-
        (4, 5, 7, 6),  # z+
        (0, 1, 5, 4),  # y-
        (2, 6, 7, 3),  # y+
        (0, 4, 6, 2),  # x-
        (1, 3, 7, 5),  # x+
    ]
    faces = []
    for a, b, c, d in quads:
        faces.append((a, b, c))
        faces.append((a, c, d))
    return TriangleMesh(verts, np.array(faces), object_id)


def make_plane(size_x: float, size_y: float, object_id: int = 1) -> TriangleMesh:
    """Open rectangle in the local z = 0 plane (two triangles)."""
    _check_dims(size_x=size_x, size_y=size_y)
    hx, hy = size_x / 2.0, size_y / 2.0
    verts = np.array([(-hx, -hy, 0.0), (hx, -hy, 0.0), (hx, hy, 0.0), (-hx, hy, 0.0)])
    faces = np.array([(0, 1, 2), (0, 2, 3)])
    return TriangleMesh(verts, faces, object_id)


_PRIMITIVES = {
    "sphere": (make_sphere, ("radius",)),
    "cylinder": (make_cylinder, ("radius", "height")),
    "box": (make_box, ("size_x", "size_y", "size_z")),
    "plane": (make_plane, ("size_x", "size_y")),
}


def make_primitive(kind: str, params: dict, tessellation: int = 32,
                   object_id: int = 1) -> TriangleMesh:
    """Dispatch on kind in {sphere, cylinder, box, plane} with named dimensions."""
    if kind not in _PRIMITIVES:
        raise ValidationError(f"unknown primitive kind {kind!r}")
    fn, names = _PRIMITIVES[kind]
    try:
        dims = [float(params[k]) for k in names]
    except KeyError as exc:
        raise ValidationError(f"{kind} needs dimension {exc.args[0]!r}") from None
    if kind in ("sphere", "cylinder"):
        return fn(*dims, tessellation, object_id=object_id)
    return fn(*dims, object_id=object_id)


def _check_dims(**dims):
    for name, value in dims.items():
        if not (value > 0):
            raise ValidationError(f"{name} must be positive, got {value}")


def _check_tess(tessellation):
    if tessellation < 3:
        raise ValidationError(f"tessellation must be >= 3, got {tessellation}")


# ---------------------------------------------------------------------------
# Wavefront OBJ
# ---------------------------------------------------------------------------

def load_obj(path, object_id: int = 1) -> TriangleMesh:
    """Load vertices and faces from an OBJ file; all other records are ignored.

    Polygon faces are fan-triangulated; exactly-degenerate triangles are dropped.
    """
    verts = []
    faces = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "v":
                if len(parts) < 4:
                    raise ValidationError(f"malformed OBJ vertex line: {line.strip()!r}")
                verts.append(tuple(float(p) for p in parts[1:4]))
            elif parts[0] == "f":
                idx = []
                for tok in parts[1:]:
                    i = int(tok.split("/")[0])
                    idx.append(i - 1 if i > 0 else len(verts) + i)
                for k in range(1, len(idx) - 1):
                    faces.append((idx[0], idx[k], idx[k + 1]))
    if not verts or not faces:
        raise ValidationError(f"OBJ file {path} has no triangles")
    verts = np.asarray(verts, dtype=np.float64)
    faces = np.asarray(faces, dtype=np.int32)
    if faces.min() < 0 or faces.max() >= len(verts):
        raise ValidationError("OBJ face index out of range")
    keep = triangle_areas(verts, faces) > 0.0
    return TriangleMesh(verts, faces[keep], object_id)

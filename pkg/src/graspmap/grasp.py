"""Kinematic parallel-jaw grasp labeling.

For each object pixel a grasp frame is constructed from the back-projected
surface point and its outward normal, then a purely geometric contact check
decides success:

  1. aperture test - if any contact pad point starts inside the target at the
     open pose the local object width exceeds the jaw gap;
  2. body test - palm and finger volumes at the open pose must not dip below
     the ground plane nor penetrate any mesh by more than the penetration
     tolerance;
  3. closing sweep - pad points cast rays along the jaw axis toward the
     opposite finger (max travel = max_aperture); a finger contacts when at
     least `contact_min` of its pad rays reach the target, and a ray blocked
     first by non-target geometry is an external collision.

Success requires both fingers in contact and no external collision.

Tool frame: +X approach (anti-parallel to the surface normal), +Y jaw,
+Z palm normal. The jaw pinch center sits at the surface point; fingers
straddle it symmetrically. GraspPose.gripper_pose keeps the hand origin at
surface_point + surface_offset * normal (0.35 m default) with the same axes.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .camera import CameraGridSpec, Intrinsics, back_project_many, sample_camera_grid
from .dataset_io import write_manifest, write_view
from .errors import ValidationError
from .geom import Pose, quat_from_matrix
from .raycast import (AcceleratedScene, obbs_intersect_meshes, points_in_mesh,
                      raycast_batch)
from .render import ViewSample, render_view

FAILURE_REASONS = ("none", "no_finger_contact", "one_finger_contact",
                   "external_collision", "aperture_exceeded")
_R_NONE, _R_NO_CONTACT, _R_ONE_CONTACT, _R_EXTERNAL, _R_APERTURE = range(5)

_WORLD_UP = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class GripperModel:
    """Parametric parallel-jaw gripper.

    Finger boxes span the full finger_length along the approach axis centered
    on the pinch point, finger_thickness along the jaw axis outside the
    aperture gap and finger_width along the palm-normal axis. The palm box
    (palm_size, ordered approach x jaw x palm-normal) sits behind the fingers.
    """

    max_aperture: float = 0.10
    finger_length: float = 0.05
    finger_thickness: float = 0.01
    finger_width: float = 0.02
    palm_size: tuple = (0.08, 0.06, 0.04)
    pad_points_per_finger: int = 5
    contact_min: int = 1
    penetration_tol: float = 0.001

    def __post_init__(self):
        if not self.max_aperture > 0:
            raise ValidationError("max_aperture must be positive")
        if self.pad_points_per_finger < 1:
            raise ValidationError("pad_points_per_finger must be >= 1")
        for name in ("finger_length", "finger_thickness", "finger_width"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive")

    def pad_offsets(self) -> np.ndarray:
        """Pad sample offsets along the finger length (approach axis)."""
        n = self.pad_points_per_finger
        if n == 1:
            return np.zeros(1)
        return np.linspace(-self.finger_length / 2, self.finger_length / 2, n)

    def contact_points(self) -> tuple[np.ndarray, np.ndarray]:
        """Pad points of each finger in the gripper (pinch-centered) frame."""
        xs = self.pad_offsets()
        a = np.column_stack([xs, np.full_like(xs, -self.max_aperture / 2),
                             np.zeros_like(xs)])
        b = a.copy()
        b[:, 1] = self.max_aperture / 2
        return a, b

    def to_dict(self) -> dict:
        return {"max_aperture": self.max_aperture, "finger_length": self.finger_length,
                "finger_thickness": self.finger_thickness,
                "finger_width": self.finger_width, "palm_size": list(self.palm_size),
                "pad_points_per_finger": self.pad_points_per_finger,
                "contact_min": self.contact_min,
                "penetration_tol": self.penetration_tol}

    @classmethod
    def from_dict(cls, d: dict) -> "GripperModel":
        kw = dict(d)
        if "palm_size" in kw:
            kw["palm_size"] = tuple(kw["palm_size"])
        return cls(**kw)


@dataclass(frozen=True)
class GraspConfig:
    surface_offset: float = 0.35   # hand origin standoff from the surface
    staging_distance: float = 1.0  # recorded pre-grasp standoff, not collision-checked


@dataclass
class GraspPose:
    pixel: tuple            # (u, v) continuous image coordinates
    surface_point: np.ndarray
    normal: np.ndarray      # outward unit normal, world frame
    gripper_pose: Pose      # hand frame: origin at surface_point + offset*normal
    staging_distance: float
    surface_offset: float


@dataclass
class GraspOutcome:
    success: bool
    failure_reason: str

    def __post_init__(self):
        if self.failure_reason not in FAILURE_REASONS:
            raise ValidationError(f"unknown failure reason {self.failure_reason!r}")
        if self.success != (self.failure_reason == "none"):
            raise ValidationError("success must mean failure_reason == 'none'")


def grasp_frames(normals: np.ndarray, camera_right) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Tool axes (approach, jaw, palm) for outward normals, vectorized.

    Jaw = normalize(world_up x approach); for near-vertical normals the camera
    right axis projected orthogonal to the approach is used instead. The jaw
    sign is chosen positive against world +X (then +Y on an exact tie).
    """
    normals = np.asarray(normals, dtype=np.float64).reshape(-1, 3)
    approach = -normals
    jaw = np.cross(np.broadcast_to(_WORLD_UP, approach.shape), approach)
    jl = np.linalg.norm(jaw, axis=1)
    degenerate = jl < 1e-6
    if degenerate.any():
        cr = np.asarray(camera_right, dtype=np.float64)
        proj = cr - approach[degenerate] * (approach[degenerate] @ cr)[:, None]
        pl = np.linalg.norm(proj, axis=1, keepdims=True)
        if np.any(pl < 1e-9):
            raise ValidationError("cannot choose a jaw axis: camera right is "
                                  "parallel to the approach axis")
        jaw[degenerate] = proj / pl
        jl[degenerate] = 1.0
    jaw /= jl[:, None]
    # sign tie-break: positive dot with +X, else +Y
    sign = np.where(np.abs(jaw[:, 0]) > 1e-12, np.sign(jaw[:, 0]), np.sign(jaw[:, 1]))
    jaw *= np.where(sign == 0, 1.0, sign)[:, None]
    palm = np.cross(approach, jaw)
    return approach, jaw, palm


def plan_grasp_pose(pixel, view: ViewSample, gripper: GripperModel,
                    config: GraspConfig = GraspConfig(),
                    target_id: int | None = None) -> GraspPose:
    """Grasp pose for one pixel of a rendered view (§-style single-pixel API)."""
    u, v = float(pixel[0]), float(pixel[1])
    i, j = int(v), int(u)
    h, w = view.shape
    if not (0 <= i < h and 0 <= j < w):
        raise ValidationError(f"pixel ({u}, {v}) outside the image")
    seg = int(view.segmentation[i, j])
    if seg == 0 or (target_id is not None and seg != target_id):
        raise ValidationError(f"pixel ({u}, {v}) is not on the target object")
    z = float(view.depth[i, j])
    n_cam = view.normals[i, j]
    if z <= 0 or np.linalg.norm(n_cam) == 0:
        raise ValidationError(f"pixel ({u}, {v}) has invalid depth or normal")
    p_cam = back_project_many([[u, v]], [z], view.intrinsics)[0]
    surface_point = view.camera_pose.transform_point(p_cam)
    normal = view.camera_pose.transform_direction(n_cam)
    camera_right = view.camera_pose.matrix()[:, 0]
    approach, jaw, palm = grasp_frames(normal[None, :], camera_right)
    rot = np.column_stack([approach[0], jaw[0], palm[0]])
    origin = surface_point + config.surface_offset * normal
    return GraspPose(pixel=(u, v), surface_point=surface_point, normal=normal,
                     gripper_pose=Pose(origin, quat_from_matrix(rot)),
                     staging_distance=config.staging_distance,
                     surface_offset=config.surface_offset)


def _body_boxes(points, approach, jaw, palm, gripper: GripperModel):
    """Centers/axes/half-extents of the two fingers and the palm, per attempt."""
    n = len(points)
    a2 = gripper.max_aperture / 2
    th = gripper.finger_thickness
    pd, pw, ph = gripper.palm_size
    centers = np.empty((n, 3, 3))
    centers[:, 0] = points - jaw * (a2 + th / 2)
    centers[:, 1] = points + jaw * (a2 + th / 2)
    centers[:, 2] = points - approach * (gripper.finger_length / 2 + pd / 2)
    axes = np.empty((n, 3, 3, 3))
    frame = np.stack([approach, jaw, palm], axis=1)  # rows = box axes
    axes[:, 0] = frame
    axes[:, 1] = frame
    axes[:, 2] = frame
    half = np.empty((n, 3, 3))
    half[:, 0] = (gripper.finger_length / 2, th / 2, gripper.finger_width / 2)
    half[:, 1] = half[:, 0]
    half[:, 2] = (pd / 2, pw / 2, ph / 2)
    return centers.reshape(-1, 3), axes.reshape(-1, 3, 3), half.reshape(-1, 3)


def _attempt_batch(scene: AcceleratedScene, points, approach, jaw, palm,
                   gripper: GripperModel, target_id: int):
    """Vectorized contact check; returns (success, reason_code) per attempt."""
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    n = len(points)
    a2 = gripper.max_aperture / 2
    xs = gripper.pad_offsets()
    p = len(xs)

    # pad points at the open pose, both fingers: (n, 2, p, 3)
    along = approach[:, None, :] * xs[None, :, None]
    pads = np.empty((n, 2, p, 3))
    pads[:, 0] = points[:, None, :] + along - a2 * jaw[:, None, :]
    pads[:, 1] = points[:, None, :] + along + a2 * jaw[:, None, :]

    # 1. aperture: any pad starting inside the target
    inside = points_in_mesh(scene, pads.reshape(-1, 3), target_id).reshape(n, 2, p)
    aperture_exceeded = inside.any(axis=(1, 2))

    # 2. body collision at the open pose
    centers, axes, half = _body_boxes(points, approach, jaw, palm, gripper)
    min_z = centers[:, 2] - np.einsum("bk,bk->b", np.abs(axes[:, :, 2]), half)
    ground_hit = (min_z < -1e-12).reshape(n, 3).any(axis=1) if scene.has_ground \
        else np.zeros(n, dtype=bool)
    mesh_hit = obbs_intersect_meshes(scene, centers, axes,
                                     half - gripper.penetration_tol).reshape(n, 3).any(axis=1)
    contained = np.zeros(n * 3, dtype=bool)
    for oid in scene.object_slices:
        contained |= points_in_mesh(scene, centers, oid)
    body_external = ground_hit | mesh_hit | contained.reshape(n, 3).any(axis=1)

    # 3. closing sweep: pad rays along the jaw axis toward the opposite finger
    dirs = np.empty((n, 2, p, 3))
    dirs[:, 0] = jaw[:, None, :]
    dirs[:, 1] = -jaw[:, None, :]
    t, obj, _, _ = raycast_batch(scene, pads.reshape(-1, 3), dirs.reshape(-1, 3))
    t = t.reshape(n, 2, p)
    obj = obj.reshape(n, 2, p)
    within = t <= gripper.max_aperture
    ray_contact = within & (obj == target_id)
    ray_blocked = within & (obj != target_id)
    finger_contact = ray_contact.sum(axis=2) >= gripper.contact_min  # (n, 2)
    sweep_external = ray_blocked.any(axis=(1, 2))

    external = body_external | sweep_external
    n_contacts = finger_contact.sum(axis=1)

    reasons = np.full(n, _R_NONE, dtype=np.int8)
    reasons[n_contacts == 0] = _R_NO_CONTACT
    reasons[n_contacts == 1] = _R_ONE_CONTACT
    reasons[external] = _R_EXTERNAL
    reasons[aperture_exceeded] = _R_APERTURE
    success = reasons == _R_NONE
    return success, reasons


def attempt_grasp(scene: AcceleratedScene, grasp: GraspPose, gripper: GripperModel,
                  target_id: int) -> GraspOutcome:
    """Kinematic contact check of one grasp pose against the pristine scene.

    Pure function of (scene, pose, gripper): the tool axes are taken from the
    pose itself.
    """
    rot = grasp.gripper_pose.matrix()
    if np.linalg.norm(rot[:, 0] + grasp.normal) > 1e-6:
        raise ValidationError("grasp pose approach axis must oppose the normal")
    success, reasons = _attempt_batch(scene, grasp.surface_point[None, :],
                                      rot[:, 0][None, :], rot[:, 1][None, :],
                                      rot[:, 2][None, :], gripper, target_id)
    return GraspOutcome(bool(success[0]), FAILURE_REASONS[int(reasons[0])])


def label_view(scene: AcceleratedScene, view: ViewSample, gripper: GripperModel,
               target_id: int, stride: int = 1,
               config: GraspConfig = GraspConfig()) -> np.ndarray:
    """Grasp label map {-1, 0, 1} for one view.

    Every pixel with row % stride == 0 and col % stride == 0 lying on the
    target is attempted; all other pixels stay -1. Attempts are mutually
    independent (each runs against the pristine scene).
    """
    if stride < 1:
        raise ValidationError("stride must be >= 1")
    mask = view.segmentation == target_id
    if not mask.any():
        raise ValidationError(f"target object {target_id} absent from the view")
    h, w = view.shape
    sampled = np.zeros((h, w), dtype=bool)
    sampled[::stride, ::stride] = True
    sampled &= mask
    labels = np.full((h, w), -1, dtype=np.int8)
    if not sampled.any():
        return labels
    ii, jj = np.nonzero(sampled)
    uv = np.column_stack([jj + 0.5, ii + 0.5])
    z = view.depth[ii, jj]
    p_cam = back_project_many(uv, z, view.intrinsics)
    points = view.camera_pose.transform_point(p_cam)
    normals = view.camera_pose.transform_direction(view.normals[ii, jj])
    camera_right = view.camera_pose.matrix()[:, 0]
    approach, jaw, palm = grasp_frames(normals, camera_right)
    success, _ = _attempt_batch(scene, points, approach, jaw, palm, gripper, target_id)
    labels[ii, jj] = success.astype(np.int8)
    return labels


def generate_dataset(scene: AcceleratedScene, grid: CameraGridSpec,
                     gripper: GripperModel, intr: Intrinsics, out_path,
                     stride: int = 1, target_id: int = 1, look_target=(0.0, 0.0, 0.0),
                     config: GraspConfig = GraspConfig(), max_views: int | None = None,
                     scene_config: dict | None = None, progress=None):
    """Render, label and persist every grid view; returns the manifest dict."""
    os.makedirs(out_path, exist_ok=True)
    poses = sample_camera_grid(grid, np.asarray(look_target, dtype=np.float64))
    if max_views is not None:
        poses = poses[:max_views]
    records = []
    for idx, pose in enumerate(poses):
        rel = os.path.join("views", f"view_{idx:04d}")
        vdir = os.path.join(out_path, rel)
        try:
            view = render_view(scene, pose, intr)
            if (view.segmentation == target_id).any():
                labels = label_view(scene, view, gripper, target_id, stride, config)
            else:
                labels = np.full(view.shape, -1, dtype=np.int8)
            files = write_view(view, labels, vdir,
                               extra_meta={"index": idx, "target_object_id": target_id,
                                           "label_stride": stride})
        except Exception as exc:
            raise RuntimeError(f"dataset generation failed at view {idx}: {exc}") from exc
        rec = {"index": idx, "dir": rel,
               "camera_pose": {"position": [float(x) for x in pose.position],
                               "orientation_wxyz": [float(x) for x in pose.rotation]},
               "files": files}
        records.append(rec)
        if progress is not None:
            progress(idx, len(poses))
    return write_manifest(out_path, intrinsics=intr, grid_spec=grid,
                          gripper_params=gripper.to_dict(), stride=stride,
                          target_object_id=target_id, views=records,
                          scene_config=scene_config)

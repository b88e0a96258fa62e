"""End-to-end grasping pipeline: view -> quality map -> 6-DoF grasp command.

Steps mirror the deployment sequence: acquire the view, obtain the target
mask (from the rendered segmentation or an external mask file standing in for
a detector), convert depth to normals, normalize the model inputs, predict
per-pixel quality, select the grasp pixel, back-project it to the world frame
and convert its surface normal into a tool orientation.

Tool frame convention: +X approach, +Y jaw, +Z palm normal. The orientation
is built through an Euler Z-Y-X intermediate before the final quaternion (the
deployed stack converts normal -> Euler -> quaternion); the direct
matrix-to-quaternion path is asserted equal at runtime, documenting that the
intermediate is semantically inert.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

import numpy as np
from PIL import Image

from .camera import back_project
from .d2nt import depth_to_normals
from .dataset_io import read_view, write_json
from .errors import EmptyMaskError, ValidationError
from .geom import (Pose, matrix_from_quat, quat_from_euler_zyx, quat_from_matrix,
                   euler_zyx_from_matrix)
from .grasp import GraspConfig, GripperModel, grasp_frames
from .predict import DEFAULT_THRESHOLD, predict_quality, select_grasp_pixel, target_mask
from .render import ViewSample

MAX_TORQUE_NM = 3.0  # command metadata only; force control is out of scope


@dataclass
class PipelineConfig:
    predictor: str = "heuristic"          # heuristic | oracle | heatmap
    heatmap_path: str | None = None
    threshold: float = DEFAULT_THRESHOLD
    depth_normalization: float = 2.0      # m; depth / scale clamped to [0, 1]
    target_id: int | None = None
    gripper: GripperModel = field(default_factory=GripperModel)
    grasp: GraspConfig = field(default_factory=GraspConfig)

    def __post_init__(self):
        if not (0.0 < self.threshold <= 1.0):
            raise ValidationError("threshold must lie in (0, 1]")
        if not self.depth_normalization > 0:
            raise ValidationError("depth normalization scale must be positive")


@dataclass
class GraspCommand:
    position: np.ndarray          # world frame, m
    orientation: np.ndarray       # unit quaternion (w, x, y, z)
    aperture: float
    surface_offset: float
    staging_distance: float
    max_torque: float
    pixel: tuple                  # (u, v) of the selected pixel center
    q_value: float

    def to_dict(self) -> dict:
        return {"position": [float(x) for x in self.position],
                "orientation_wxyz": [float(x) for x in self.orientation],
                "aperture": self.aperture,
                "surface_offset": self.surface_offset,
                "staging_distance": self.staging_distance,
                "max_torque": self.max_torque,
                "pixel_uv": [float(self.pixel[0]), float(self.pixel[1])],
                "q_value": self.q_value}


def grasp_orientation_from_normal(normal, camera_right=(1.0, 0.0, 0.0)) -> np.ndarray:
    """Tool orientation whose +X axis opposes the outward surface normal.

    The jaw (+Y) follows the horizontal roll rule with `camera_right` as the
    fallback for near-vertical normals. Built via Euler Z-Y-X, then quaternion.
    """
    normal = np.asarray(normal, dtype=np.float64)
    n = np.linalg.norm(normal)
    if n < 1e-12:
        raise ValidationError("cannot orient the gripper from a zero normal")
    approach, jaw, palm = grasp_frames((normal / n)[None, :], camera_right)
    rot = np.column_stack([approach[0], jaw[0], palm[0]])
    yaw, pitch, roll = euler_zyx_from_matrix(rot)
    q = quat_from_euler_zyx(yaw, pitch, roll)
    q_direct = quat_from_matrix(rot)
    if min(np.linalg.norm(q - q_direct), np.linalg.norm(q + q_direct)) > 1e-9:
        raise AssertionError("Euler-intermediate and direct orientations disagree")
    return q


def preprocess_view(view: ViewSample, normals: np.ndarray, mask: np.ndarray,
                    depth_scale: float) -> np.ndarray:
    """H x W x 8 network input: RGB, depth scaled to [0,1], unit normals, mask."""
    depth01 = np.clip(view.depth / depth_scale, 0.0, 1.0)
    nrm = normals.copy()
    lens = np.linalg.norm(nrm, axis=2)
    ok = lens > 0
    nrm[ok] /= lens[ok][:, None]
    return np.concatenate([view.rgb, depth01[..., None], nrm,
                           mask[..., None].astype(np.float64)], axis=2)


def load_mask_png(path, shape) -> np.ndarray:
    arr = np.asarray(Image.open(path).convert("L"))
    if arr.shape != shape:
        raise ValidationError(f"{path}: mask size {arr.shape} != view size {shape}")
    return arr > 0


@dataclass
class PipelineResult:
    command: GraspCommand
    quality: np.ndarray
    region: np.ndarray
    normals: np.ndarray
    inputs: np.ndarray
    timings: dict


def run_pipeline(view_source, config: PipelineConfig, labels=None,
                 mask_path=None) -> PipelineResult:
    """Run the full pipeline on a view directory or an in-memory ViewSample."""
    timings = {}
    t0 = time.perf_counter()
    if isinstance(view_source, ViewSample):
        view = view_source
    else:
        view, disk_labels, _meta = read_view(view_source)
        if labels is None:
            labels = disk_labels
    timings["load"] = time.perf_counter() - t0

    # mask acquisition and depth-to-normal conversion are mutually independent
    # (the deployed pipeline runs them concurrently); both precede prediction
    t0 = time.perf_counter()
    if mask_path is not None:
        mask = load_mask_png(mask_path, view.shape)
        if not mask.any():
            raise EmptyMaskError(f"{mask_path}: mask is empty")
    else:
        mask = target_mask(view, config.target_id)
        if not mask.any():
            raise EmptyMaskError("target mask is empty")
    timings["mask"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    normals = depth_to_normals(view.depth, view.intrinsics)
    timings["normals"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    inputs = preprocess_view(view, normals, mask, config.depth_normalization)
    timings["preprocess"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    q = predict_quality(view, config.predictor, labels=labels,
                        heatmap_path=config.heatmap_path, mask=mask)
    timings["predict"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    # pixels without valid depth or a valid estimated normal cannot yield a
    # command (no back-projection / orientation), so they are never selected
    valid_geom = (view.depth > 0) & (np.linalg.norm(normals, axis=2) > 0)
    q_sel = np.where(valid_geom, q, 0.0)
    (u, v), q_value, region = select_grasp_pixel(q_sel, mask, config.threshold)
    i, j = int(v), int(u)
    z = float(view.depth[i, j])
    if z <= 0:
        raise ValidationError(
            "selected pixel has invalid depth; the predictor must assign q = 0 there")
    p_cam = back_project(u, v, z, view.intrinsics)
    position = view.camera_pose.transform_point(p_cam)
    n_cam = normals[i, j]
    if np.linalg.norm(n_cam) == 0:
        raise ValidationError(
            "selected pixel has no valid normal; the predictor must assign q = 0 there")
    n_world = view.camera_pose.transform_direction(n_cam)
    camera_right = view.camera_pose.matrix()[:, 0]
    orientation = grasp_orientation_from_normal(n_world, camera_right)
    timings["select"] = time.perf_counter() - t0

    command = GraspCommand(position=position, orientation=orientation,
                           aperture=config.gripper.max_aperture,
                           surface_offset=config.grasp.surface_offset,
                           staging_distance=config.grasp.staging_distance,
                           max_torque=MAX_TORQUE_NM, pixel=(u, v), q_value=q_value)
    return PipelineResult(command, q, region, normals, inputs, timings)


def write_grasp_command(path, command: GraspCommand):
    write_json(path, command.to_dict())

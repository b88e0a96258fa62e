"""Scene/gripper/grid JSON configuration shared by the CLI and the demos.

scene.json schema:
  {
    "objects": [{"kind": "cylinder", "dimensions": {"radius": .., "height": ..},
                 "tessellation": 128, "object_id": 1,
                 "pose": {"position": [x,y,z], "orientation_wxyz": [w,x,y,z]}}
                | {"obj_path": "mesh.obj", "object_id": 2, "pose": {...}}],
    "ground_plane": true,
    "gripper": { GripperModel fields },
    "grid": { CameraGridSpec fields },
    "intrinsics": { fx, fy, u0, v0, width, height },
    "target_object_id": 1,
    "look_target": [0, 0, 0.15],
    "stride": 1,
    "surface_offset": 0.35,
    "staging_distance": 1.0
  }
"""

from __future__ import annotations

import json
import os

import numpy as np

from .camera import CameraGridSpec, Intrinsics, spot_hand_intrinsics
from .errors import ValidationError
from .geom import Pose
from .grasp import GraspConfig, GripperModel
from .mesh import load_obj, make_primitive
from .raycast import AcceleratedScene, Scene


def _pose_from_config(d: dict | None) -> Pose:
    if not d:
        return Pose()
    pos = np.array(d.get("position", (0.0, 0.0, 0.0)), dtype=np.float64)
    quat = np.array(d.get("orientation_wxyz", (1.0, 0.0, 0.0, 0.0)), dtype=np.float64)
    return Pose(pos, quat)


def load_scene_config(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if "objects" not in cfg or not cfg["objects"]:
        raise ValidationError(f"{path}: scene config needs a non-empty 'objects' list")
    return cfg


def build_scene(cfg: dict, base_dir=".") -> AcceleratedScene:
    scene = Scene(ground_plane=bool(cfg.get("ground_plane", True)))
    for k, obj in enumerate(cfg["objects"]):
        object_id = int(obj.get("object_id", k + 1))
        if "kind" in obj:
            mesh = make_primitive(obj["kind"], obj.get("dimensions", {}),
                                  tessellation=int(obj.get("tessellation", 64)),
                                  object_id=object_id)
        elif "obj_path" in obj:
            p = obj["obj_path"]
            if not os.path.isabs(p):
                p = os.path.join(base_dir, p)
            mesh = load_obj(p, object_id=object_id)
        else:
            raise ValidationError("each object needs either 'kind' or 'obj_path'")
        scene.add(mesh, _pose_from_config(obj.get("pose")))
    return AcceleratedScene(scene)


def gripper_from_config(cfg: dict) -> GripperModel:
    return GripperModel.from_dict(cfg.get("gripper", {}))


def grid_from_config(cfg: dict) -> CameraGridSpec:
    return CameraGridSpec.from_dict(cfg.get("grid", {}))


def intrinsics_from_config(cfg: dict) -> Intrinsics:
    if "intrinsics" in cfg:
        return Intrinsics.from_dict(cfg["intrinsics"])
    return spot_hand_intrinsics()


def grasp_config_from_config(cfg: dict) -> GraspConfig:
    return GraspConfig(surface_offset=float(cfg.get("surface_offset", 0.35)),
                       staging_distance=float(cfg.get("staging_distance", 1.0)))

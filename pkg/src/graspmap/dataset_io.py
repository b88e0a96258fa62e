"""Bit-exact dataset persistence.

Formats (the full contract shared with the trainer):
  - float channels (depth, normals, heatmaps): PFM, 32-bit float, little-endian
    (scale -1.0), rows stored top-to-bottom so pixel (0, 0) is top-left
  - rgb: 8-bit PNG, linear [0,1] * 255 rounded
  - segmentation: 16-bit PNG of object ids
  - labels: 8-bit PNG with {1 -> 255, 0 -> 0, -1 -> 128}
  - manifest.json at the dataset root; every float is formatted with 9
    significant digits so regeneration is byte-identical
"""

from __future__ import annotations

import json
import os

import numpy as np
from PIL import Image

from .camera import PRNG_NAME, Intrinsics
from .errors import DataFormatError, ValidationError
from .geom import Pose
from .render import ViewSample

FORMAT_VERSION = 1

LABEL_TO_BYTE = {1: 255, 0: 0, -1: 128}
BYTE_TO_LABEL = {255: 1, 0: 0, 128: -1}

VIEW_FILES = {
    "rgb": "rgb.png",
    "depth": "depth.pfm",
    "normals": "normals.pfm",
    "segmentation": "segmentation.png",
    "labels": "labels.png",
}


# ---------------------------------------------------------------------------
# PFM
# ---------------------------------------------------------------------------

def write_pfm(path, data: np.ndarray):
    """1-channel (H, W) or 3-channel (H, W, 3) float32 PFM, top-to-bottom rows."""
    data = np.asarray(data, dtype=np.float32)
    if data.ndim == 2:
        header = b"Pf"
    elif data.ndim == 3 and data.shape[2] == 3:
        header = b"PF"
    else:
        raise ValidationError(f"PFM data must be HxW or HxWx3, got {data.shape}")
    h, w = data.shape[:2]
    with open(path, "wb") as fh:
        fh.write(header + b"\n")
        fh.write(f"{w} {h}\n".encode("ascii"))
        fh.write(b"-1.0\n")
        fh.write(np.ascontiguousarray(data, dtype="<f4").tobytes())


def read_pfm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.readline().strip()
        if magic == b"PF":
            channels = 3
        elif magic == b"Pf":
            channels = 1
        else:
            raise DataFormatError(f"{path}: not a PFM file (magic {magic!r})")
        dims = fh.readline().split()
        if len(dims) != 2:
            raise DataFormatError(f"{path}: malformed PFM dimension line")
        try:
            w, h = int(dims[0]), int(dims[1])
            scale = float(fh.readline())
        except ValueError:
            raise DataFormatError(f"{path}: malformed PFM header") from None
        if scale >= 0:
            raise DataFormatError(
                f"{path}: only little-endian top-to-bottom PFM (negative scale) is supported")
        raw = fh.read(4 * w * h * channels)
        if len(raw) != 4 * w * h * channels:
            raise DataFormatError(f"{path}: truncated PFM payload")
        data = np.frombuffer(raw, dtype="<f4").reshape(h, w, channels)
    return data[..., 0].copy() if channels == 1 else data.copy()


# ---------------------------------------------------------------------------
# PNG channels
# ---------------------------------------------------------------------------

def _write_rgb(path, rgb):
    arr = np.round(np.asarray(rgb, dtype=np.float64) * 255.0).astype(np.uint8)
    Image.fromarray(arr, mode="RGB").save(path)


def _read_rgb(path):
    arr = np.asarray(Image.open(path).convert("RGB"), dtype=np.uint8)
    return arr.astype(np.float64) / 255.0


def _write_segmentation(path, seg):
    seg = np.asarray(seg)
    if seg.min() < 0 or seg.max() > 65535:
        raise ValidationError("segmentation ids must fit in uint16")
    Image.fromarray(seg.astype(np.uint16)).save(path)


def _read_segmentation(path):
    img = Image.open(path)
    arr = np.asarray(img, dtype=np.int64)
    if arr.ndim != 2:
        raise DataFormatError(f"{path}: segmentation PNG must be single-channel")
    return arr.astype(np.int32)


def _write_labels(path, labels):
    labels = np.asarray(labels)
    if not np.isin(labels, (-1, 0, 1)).all():
        raise ValidationError("labels must be in {-1, 0, 1}")
    out = np.full(labels.shape, 128, dtype=np.uint8)
    out[labels == 1] = 255
    out[labels == 0] = 0
    Image.fromarray(out, mode="L").save(path)


def _read_labels(path):
    arr = np.asarray(Image.open(path), dtype=np.uint8)
    if arr.ndim != 2:
        raise DataFormatError(f"{path}: label PNG must be single-channel")
    bad = ~np.isin(arr, (0, 128, 255))
    if bad.any():
        raise DataFormatError(
            f"{path}: label byte {int(arr[bad][0])} outside {{0, 128, 255}}")
    labels = np.full(arr.shape, -1, dtype=np.int8)
    labels[arr == 255] = 1
    labels[arr == 0] = 0
    return labels


# ---------------------------------------------------------------------------
# views
# ---------------------------------------------------------------------------

def _pose_to_dict(pose: Pose) -> dict:
    return {"position": [float(x) for x in pose.position],
            "orientation_wxyz": [float(x) for x in pose.rotation]}

def _pose_from_dict(d: dict) -> Pose:
    return Pose(np.array(d["position"], dtype=np.float64),
                np.array(d["orientation_wxyz"], dtype=np.float64))


def write_view(view: ViewSample, labels, view_dir, extra_meta: dict | None = None):
    """Persist one view (and optional label map) into `view_dir`.

    Returns the dict of written file names. A `view.json` with the camera pose
    and intrinsics makes the directory self-contained for `infer`.
    """
    view.validate()
    os.makedirs(view_dir, exist_ok=True)
    _write_rgb(os.path.join(view_dir, VIEW_FILES["rgb"]), view.rgb)
    write_pfm(os.path.join(view_dir, VIEW_FILES["depth"]), view.depth)
    write_pfm(os.path.join(view_dir, VIEW_FILES["normals"]), view.normals)
    _write_segmentation(os.path.join(view_dir, VIEW_FILES["segmentation"]),
                        view.segmentation)
    files = dict(VIEW_FILES)
    if labels is not None:
        if np.asarray(labels).shape != view.shape:
            raise ValidationError("label map size does not match the view")
        _write_labels(os.path.join(view_dir, VIEW_FILES["labels"]), labels)
    else:
        del files["labels"]
    meta = {"camera_pose": _pose_to_dict(view.camera_pose),
            "intrinsics": view.intrinsics.to_dict(),
            "files": files}
    if extra_meta:
        meta.update(extra_meta)
    write_json(os.path.join(view_dir, "view.json"), meta)
    return files


def read_view(view_dir):
    """Inverse of write_view; revalidates the ViewSample invariants.

    Returns (ViewSample, labels-or-None, meta dict).
    """
    meta_path = os.path.join(view_dir, "view.json")
    if not os.path.isfile(meta_path):
        raise DataFormatError(f"{view_dir}: missing view.json")
    with open(meta_path, "r", encoding="utf-8") as fh:
        meta = json.load(fh)
    pose = _pose_from_dict(meta["camera_pose"])
    intr = Intrinsics.from_dict(meta["intrinsics"])
    rgb = _read_rgb(os.path.join(view_dir, VIEW_FILES["rgb"]))
    depth = read_pfm(os.path.join(view_dir, VIEW_FILES["depth"])).astype(np.float64)
    normals = read_pfm(os.path.join(view_dir, VIEW_FILES["normals"])).astype(np.float64)
    seg = _read_segmentation(os.path.join(view_dir, VIEW_FILES["segmentation"]))
    view = ViewSample(rgb, depth, seg, normals, pose, intr)
    try:
        view.validate()
    except ValidationError as exc:
        raise DataFormatError(f"{view_dir}: {exc}") from None
    labels = None
    label_path = os.path.join(view_dir, VIEW_FILES["labels"])
    if os.path.isfile(label_path):
        labels = _read_labels(label_path)
        if labels.shape != view.shape:
            raise DataFormatError(f"{view_dir}: label size does not match the view")
    return view, labels, meta


# ---------------------------------------------------------------------------
# manifest
# ---------------------------------------------------------------------------

def _round_floats(obj):
    """Round every float to 9 significant digits for stable serialization."""
    if isinstance(obj, float):
        return float(f"{obj:.9g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def write_json(path, obj):
    """Serialize with stable key order and 9-significant-digit floats; returns
    the rounded object (what a reader will see)."""
    obj = _round_floats(obj)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return obj


def write_manifest(dataset_dir, *, intrinsics, grid_spec, gripper_params, stride,
                   target_object_id, views, scene_config=None):
    from .d2nt import VARIANT as D2NT_VARIANT
    manifest = {
        "format_version": FORMAT_VERSION,
        "prng": PRNG_NAME,
        "d2nt_variant": D2NT_VARIANT,
        "seed": grid_spec.seed,
        "intrinsics": intrinsics.to_dict(),
        "camera_grid": grid_spec.to_dict(),
        "gripper": gripper_params,
        "stride": stride,
        "target_object_id": target_object_id,
        "unsampled_object_pixels": "labeled -1 (stride grid), mask in training",
        "views": views,
    }
    if scene_config is not None:
        manifest["scene"] = scene_config
    return write_json(os.path.join(dataset_dir, "manifest.json"), manifest)


def read_manifest(dataset_dir):
    path = os.path.join(dataset_dir, "manifest.json")
    if not os.path.isfile(path):
        raise DataFormatError(f"{dataset_dir}: missing manifest.json")
    with open(path, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    if manifest.get("format_version") != FORMAT_VERSION:
        raise DataFormatError(
            f"unsupported manifest format_version {manifest.get('format_version')}")
    for rec in manifest["views"]:
        vdir = os.path.join(dataset_dir, rec["dir"])
        if not os.path.isdir(vdir):
            raise DataFormatError(f"manifest references missing view dir {rec['dir']}")
    return manifest

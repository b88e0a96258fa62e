"""Grasp-quality maps: prediction, pixel selection and evaluation.

Three predictors share one contract (H x W map in [0, 1], zero outside the
target mask):

  - heuristic: q = mask * clamp(-n_z, 0, 1) * min(1, d_mask / 10) with n from
    depth-to-normal conversion and d_mask the Euclidean distance to the mask
    boundary in pixels. A fixed, documented baseline, not a tuned model.
  - oracle: ground-truth labels mapped {1 -> 1.0, 0 -> 0.0, -1 -> 0.0}.
  - heatmap: an externally trained 1-channel float PFM (the trainer's export).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .d2nt import depth_to_normals
from .dataset_io import read_pfm
from .errors import EmptyMaskError, NoViablePixelError, ValidationError
from .render import ViewSample

EDGE_DISTANCE_REF = 10.0  # pixels
DEFAULT_THRESHOLD = 0.85  # optimal-region cut: quality within 15% of 1


@dataclass
class EvalMetrics:
    precision: float
    recall: float
    iou: float
    threshold: float
    tp: int
    fp: int
    fn: int
    tn: int

    def to_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "iou": self.iou,
                "threshold": self.threshold, "tp": self.tp, "fp": self.fp,
                "fn": self.fn, "tn": self.tn}


def target_mask(view: ViewSample, target_id: int | None = None) -> np.ndarray:
    """Boolean target mask from the view's segmentation."""
    if target_id is None:
        from .raycast import GROUND_OBJECT_ID
        ids = np.unique(view.segmentation)
        ids = ids[(ids != 0) & (ids != GROUND_OBJECT_ID)]
        if len(ids) == 0:
            raise EmptyMaskError("view contains no target object pixels")
        target_id = int(ids[0])
    return view.segmentation == target_id


def predict_heuristic(view: ViewSample, mask: np.ndarray) -> np.ndarray:
    """Normal-alignment x edge-distance baseline over the mask."""
    normals = depth_to_normals(view.depth, view.intrinsics)
    align = np.clip(-normals[..., 2], 0.0, 1.0)
    # masked pixels with invalid depth/normal are unpredictable -> q = 0
    align[np.linalg.norm(normals, axis=2) == 0] = 0.0
    dist = ndimage.distance_transform_edt(mask)
    edge = np.minimum(1.0, dist / EDGE_DISTANCE_REF)
    q = np.where(mask, align * edge, 0.0)
    return q


def predict_oracle(labels: np.ndarray, mask: np.ndarray) -> np.ndarray:
    labels = np.asarray(labels)
    q = np.where(mask & (labels == 1), 1.0, 0.0)
    return q


def load_heatmap(path, view: ViewSample, mask: np.ndarray) -> np.ndarray:
    q = read_pfm(path).astype(np.float64)
    if q.ndim != 2:
        raise ValidationError(f"{path}: heatmap must be a 1-channel PFM")
    if q.shape != view.shape:
        raise ValidationError(
            f"{path}: heatmap size {q.shape} does not match the view {view.shape}")
    if q.min() < -1e-6 or q.max() > 1 + 1e-6:
        raise ValidationError(f"{path}: heatmap values must lie in [0, 1]")
    return np.where(mask, np.clip(q, 0.0, 1.0), 0.0)


def predict_quality(view: ViewSample, predictor: str, *, labels=None,
                    heatmap_path=None, target_id: int | None = None,
                    mask: np.ndarray | None = None) -> np.ndarray:
    """Dispatch on predictor in {heuristic, oracle, heatmap}."""
    if mask is None:
        mask = target_mask(view, target_id)
    if predictor == "heuristic":
        return predict_heuristic(view, mask)
    if predictor == "oracle":
        if labels is None:
            raise ValidationError("oracle predictor needs a ground-truth label map")
        return predict_oracle(labels, mask)
    if predictor == "heatmap":
        if heatmap_path is None:
            raise ValidationError("heatmap predictor needs a PFM path")
        return load_heatmap(heatmap_path, view, mask)
    raise ValidationError(f"unknown predictor {predictor!r}")


def select_grasp_pixel(q: np.ndarray, mask: np.ndarray,
                       threshold: float = DEFAULT_THRESHOLD):
    """Argmax pixel over the mask plus the thresholded optimal region.

    Returns ((u, v) continuous pixel center, q_value, region mask). Ties break
    to the smallest row-major index; all-zero quality raises NoViablePixelError.
    """
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise EmptyMaskError("cannot select a grasp pixel from an empty mask")
    qm = np.where(mask, q, -1.0)
    flat = int(np.argmax(qm))
    i, j = np.unravel_index(flat, q.shape)
    q_value = float(q[i, j])
    if q_value <= 0.0:
        raise NoViablePixelError("every masked pixel has zero grasp quality")
    region = mask & (q >= threshold)
    return (j + 0.5, i + 0.5), q_value, region


def evaluate(q: np.ndarray, labels: np.ndarray,
             threshold: float = DEFAULT_THRESHOLD) -> EvalMetrics:
    """Binarize q at the threshold and score it against {0, 1} labels.

    Pixels labeled -1 are excluded from every count. Empty denominators give 0.
    """
    q = np.asarray(q)
    labels = np.asarray(labels)
    if q.shape != labels.shape:
        raise ValidationError(f"quality {q.shape} vs labels {labels.shape} size mismatch")
    scored = labels != -1
    pred = q >= threshold
    tp = int(np.count_nonzero(scored & pred & (labels == 1)))
    fp = int(np.count_nonzero(scored & pred & (labels == 0)))
    fn = int(np.count_nonzero(scored & ~pred & (labels == 1)))
    tn = int(np.count_nonzero(scored & ~pred & (labels == 0)))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    iou = tp / (tp + fp + fn) if tp + fp + fn else 0.0
    return EvalMetrics(precision, recall, iou, threshold, tp, fp, fn, tn)

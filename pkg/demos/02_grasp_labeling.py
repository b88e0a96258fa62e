"""Label every object pixel of a view by simulated parallel-jaw grasp attempts.

For the straight-on equatorial view of the canonical cylinder, every 2nd
object pixel is back-projected to the world frame, a grasp frame is built from
its surface normal, and the kinematic contact check produces the {1, 0, -1}
label map. The demo prints the outcome breakdown and saves a color overlay
(green = success, red = failure, untouched = indeterminate).
"""

import os

import numpy as np
from PIL import Image

import graspmap as gm
from graspmap.grasp import FAILURE_REASONS, _attempt_batch, grasp_frames
from graspmap.camera import back_project_many

OUT = os.path.join(os.path.dirname(__file__), "output", "labeling")


def main():
    mesh = gm.make_cylinder(0.04, 0.30, 128, object_id=1)
    scene = gm.AcceleratedScene(gm.Scene().add(mesh, gm.Pose([0, 0, 0.15])))
    gripper = gm.GripperModel()
    print(f"gripper: aperture {gripper.max_aperture} m, "
          f"{gripper.pad_points_per_finger} contact pads per finger")

    intr = gm.Intrinsics(147.8, 147.8, 64.0, 64.0, 128, 128)
    view = gm.render_view(scene, gm.look_at([0, 0.5, 0.15], [0, 0, 0.15]), intr)
    labels = gm.label_view(scene, view, gripper, target_id=1, stride=2)
    pos, neg = int((labels == 1).sum()), int((labels == 0).sum())
    print(f"attempted {pos + neg} pixels: {pos} success, {neg} failure "
          f"(positive rate {pos / (pos + neg):.2f})")

    # failure-reason breakdown over the failed pixels
    ii, jj = np.nonzero(labels == 0)
    uv = np.column_stack([jj + 0.5, ii + 0.5])
    p_cam = back_project_many(uv, view.depth[ii, jj], intr)
    pts = view.camera_pose.transform_point(p_cam)
    nrm = view.camera_pose.transform_direction(view.normals[ii, jj])
    a, j, p = grasp_frames(nrm, view.camera_pose.matrix()[:, 0])
    _, reasons = _attempt_batch(scene, pts, a, j, p, gripper, 1)
    for code in np.unique(reasons):
        n = int((reasons == code).sum())
        print(f"  {FAILURE_REASONS[code]}: {n}")

    # one spec-style spot check: the mid-height equatorial grasp succeeds
    gp = gm.plan_grasp_pose((64.5, 64.5), view, gripper)
    out = gm.attempt_grasp(scene, gp, gripper, 1)
    print(f"mid-height equatorial attempt at {np.round(gp.surface_point, 3)}: "
          f"{'success' if out.success else out.failure_reason}")

    os.makedirs(OUT, exist_ok=True)
    overlay = (np.clip(view.rgb, 0, 1) * 255).astype(np.uint8)
    overlay[labels == 1] = (40, 200, 40)
    overlay[labels == 0] = (220, 40, 40)
    Image.fromarray(overlay).save(os.path.join(OUT, "label_overlay.png"))
    print(f"wrote {OUT}/label_overlay.png")


if __name__ == "__main__":
    main()

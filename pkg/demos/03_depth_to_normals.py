"""Recover surface normals from a depth map and compare with ground truth.

Renders a sphere at the full 480x640 resolution, runs the depth-gradient
normal estimator, and reports the angular error against the analytic sphere
normals. Saves both normal maps as color-coded PNGs.
"""

import os

import numpy as np
from PIL import Image

import graspmap as gm
from graspmap.camera import back_project_many

OUT = os.path.join(os.path.dirname(__file__), "output", "normals")


def save_normal_png(path, normals):
    img = ((normals + 1.0) * 0.5 * 255).astype(np.uint8)
    img[np.linalg.norm(normals, axis=2) == 0] = 0
    Image.fromarray(img).save(path)


def main():
    intr = gm.spot_hand_intrinsics()
    center = np.array([0.0, 0.0, 0.5])
    sphere = gm.make_sphere(0.05, 256, object_id=1)
    scene = gm.AcceleratedScene(gm.Scene([(sphere, gm.Pose(center))],
                                         ground_plane=False))
    cam = gm.look_at([0.0, -0.5, 0.5], center)
    view = gm.render_view(scene, cam, intr)
    print(f"rendered {int((view.segmentation == 1).sum())} sphere pixels at "
          f"{intr.width}x{intr.height}")

    est = gm.depth_to_normals(view.depth, intr)
    valid = (np.linalg.norm(est, axis=2) > 0) & (view.segmentation == 1)
    ii, jj = np.nonzero(valid)
    p_world = cam.transform_point(back_project_many(
        np.column_stack([jj + 0.5, ii + 0.5]), view.depth[ii, jj], intr))
    truth = p_world - center
    truth /= np.linalg.norm(truth, axis=1, keepdims=True)
    truth_cam = cam.inverse_transform_direction(truth)
    ang = np.degrees(np.arccos(np.clip(
        np.einsum("ij,ij->i", est[ii, jj], truth_cam), -1, 1)))
    print(f"angular error vs analytic sphere normals: mean {ang.mean():.3f} deg, "
          f"p95 {np.percentile(ang, 95):.3f} deg, max {ang.max():.3f} deg")

    os.makedirs(OUT, exist_ok=True)
    save_normal_png(os.path.join(OUT, "estimated.png"), est)
    save_normal_png(os.path.join(OUT, "rendered.png"), view.normals)
    print(f"wrote {OUT}/estimated.png and rendered.png")


if __name__ == "__main__":
    main()

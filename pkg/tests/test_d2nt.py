import numpy as np
import pytest

import graspmap as gm
from graspmap.camera import back_project_many
from graspmap.d2nt import depth_to_normals
from graspmap.errors import ValidationError

INTR = gm.spot_hand_intrinsics()


def test_fronto_parallel_plane_exact():
    normals = depth_to_normals(np.full((480, 640), 1.0), INTR)
    interior = normals[1:-1, 1:-1]
    assert np.array_equal(interior, np.broadcast_to([0, 0, -1.0], interior.shape))
    # border pixels lack a full stencil
    assert (normals[0] == 0).all() and (normals[-1] == 0).all()
    assert (normals[:, 0] == 0).all() and (normals[:, -1] == 0).all()


def test_analytic_gradient_example():
    """z = 1 + 0.001 (u - u0) evaluated exactly at the principal point.

    With half-integer pixel centers the principal point must itself be a pixel
    center for the (u - u0) = 0 case, hence u0 = 320.5, v0 = 240.5 here.
    """
    intr = gm.Intrinsics(554.26, 554.26, 320.5, 240.5, 640, 480)
    u = np.arange(640) + 0.5
    depth = np.tile(1.0 + 0.001 * (u - intr.u0), (480, 1))
    normals = depth_to_normals(depth, intr)
    n = normals[240, 320]
    assert np.abs(n - np.array([0.48478, 0.0, -0.87464])).max() < 1e-4


def test_all_zero_depth():
    normals = depth_to_normals(np.zeros((480, 640)), INTR)
    assert (normals == 0).all()


def test_dimension_mismatch():
    with pytest.raises(ValidationError):
        depth_to_normals(np.ones((100, 100)), INTR)


def test_invalid_neighbors_zeroed():
    depth = np.full((32, 32), 1.0)
    depth[10, 10] = 0.0
    normals = depth_to_normals(depth, gm.Intrinsics(50.0, 50.0, 16, 16, 32, 32))
    # the invalid pixel and its 4-neighborhood lose their stencil
    assert (normals[10, 10] == 0).all()
    for di, dj in ((0, 1), (0, -1), (1, 0), (-1, 0)):
        assert (normals[10 + di, 10 + dj] == 0).all()
    assert np.allclose(normals[5, 5], [0, 0, -1])


def test_output_support_exact():
    """Zero exactly where the stencil touches invalid depth or the border."""
    rng = np.random.default_rng(11)
    depth = np.full((40, 40), 2.0)
    holes = rng.integers(0, 40, size=(25, 2))
    depth[holes[:, 0], holes[:, 1]] = 0.0
    valid = depth > 0
    ok = np.zeros_like(valid)
    ok[1:-1, 1:-1] = (valid[1:-1, 1:-1] & valid[1:-1, :-2] & valid[1:-1, 2:]
                      & valid[:-2, 1:-1] & valid[2:, 1:-1])
    normals = depth_to_normals(depth, gm.Intrinsics(50.0, 50.0, 20, 20, 40, 40))
    assert np.array_equal(np.linalg.norm(normals, axis=2) > 0, ok)


def test_camera_facing_everywhere(canonical_view):
    normals = depth_to_normals(canonical_view.depth, canonical_view.intrinsics)
    valid = np.linalg.norm(normals, axis=2) > 0
    assert (normals[..., 2][valid] < 0).all()


def _angular_error_vs_truth(view, true_normals_cam):
    est = depth_to_normals(view.depth, view.intrinsics)
    valid = np.linalg.norm(est, axis=2) > 0
    dots = np.clip(np.einsum("ijk,ijk->ij", est, true_normals_cam)[valid], -1, 1)
    return np.degrees(np.arccos(dots))


def test_tilted_plane_interior_accuracy():
    """Noise-free rendered tilted plane: interior angular error < 0.5 deg."""
    import graspmap.geom as geo
    tilt = geo.quat_multiply(geo.quat_from_axis_angle([1, 0, 0], -np.pi / 2),
                             geo.quat_from_axis_angle([0, 1, 0], np.radians(25)))
    mesh = gm.make_plane(6.0, 6.0)
    pose_obj = gm.Pose([0, 1.0, 0], tilt)
    acc = gm.AcceleratedScene(gm.Scene([(mesh, pose_obj)], ground_plane=False))
    cam = gm.look_at([0, -0.5, 0], [0, 1.0, 0])
    view = gm.render_view(acc, cam, INTR)
    assert (view.segmentation == 1).all()
    true_cam = view.normals  # rendered flat normals are the plane normal
    err = _angular_error_vs_truth(view, true_cam)
    assert err.max() < 0.5


def test_sphere_interior_accuracy():
    """Rendered sphere (tess 256): mean interior angular error < 3 deg."""
    mesh = gm.make_sphere(0.05, 256)
    center = np.array([0.0, 0.0, 0.5])
    acc = gm.AcceleratedScene(gm.Scene([(mesh, gm.Pose(center))], ground_plane=False))
    cam = gm.look_at([0, -0.5, 0.5], [0, 0, 0.5])
    view = gm.render_view(acc, cam, INTR)
    est = depth_to_normals(view.depth, view.intrinsics)
    valid = (np.linalg.norm(est, axis=2) > 0) & (view.segmentation == 1)
    ii, jj = np.nonzero(valid)
    p_cam = back_project_many(np.column_stack([jj + 0.5, ii + 0.5]),
                              view.depth[ii, jj], view.intrinsics)
    p_world = cam.transform_point(p_cam)
    truth = p_world - center
    truth /= np.linalg.norm(truth, axis=1, keepdims=True)
    truth_cam = cam.inverse_transform_direction(truth)
    dots = np.clip(np.einsum("ij,ij->i", est[ii, jj], truth_cam), -1, 1)
    err = np.degrees(np.arccos(dots))
    assert err.mean() < 3.0

import numpy as np

import graspmap as gm
from graspmap.raycast import GROUND_OBJECT_ID, AcceleratedScene, Scene
from graspmap.render import pixel_ray_directions, render_view


def test_sphere_center_depth():
    """Unit sphere at (0,0,2) seen from the origin: center-pixel depth = 1."""
    mesh = gm.make_sphere(1.0, 256)
    acc = AcceleratedScene(Scene([(mesh, gm.Pose([0, 0, 2.0]))], ground_plane=False))
    intr = gm.Intrinsics(554.26, 554.26, 320, 240, 640, 480)
    # camera at origin looking along +z: use look_at with a horizontal-ish up
    pose = gm.Pose()  # identity: camera frame == world, +Z forward
    view = render_view(acc, pose, intr)
    assert abs(view.depth[240, 320] - 1.0) < 1e-3
    assert view.segmentation[240, 320] == 1


def test_empty_scene_all_background(desk_intrinsics):
    acc = AcceleratedScene(Scene([(gm.make_box(0.01, 0.01, 0.01), gm.Pose([9, 9, 9]))],
                                 ground_plane=False))
    pose = gm.look_at([0, 0.5, 0.2], [0, 0, 0.2])
    view = render_view(acc, pose, desk_intrinsics)
    assert (view.depth == 0).all()
    assert (view.segmentation == 0).all()
    assert (view.normals == 0).all()
    assert (view.rgb == 0).all()


def test_channel_support_consistency(canonical_view):
    has_depth = canonical_view.depth > 0
    assert np.array_equal(has_depth, canonical_view.segmentation != 0)
    assert np.array_equal(has_depth, np.linalg.norm(canonical_view.normals, axis=2) > 0)


def test_rendered_normals_match_raycast(canonical_view, canonical_scene):
    """Per-pixel normals equal the hit triangle's face normal in camera frame."""
    from graspmap.raycast import raycast_batch
    intr = canonical_view.intrinsics
    dirs_cam, _ = pixel_ray_directions(intr)
    rot = canonical_view.camera_pose.matrix()
    dirs_world = dirs_cam @ rot.T
    origins = np.broadcast_to(canonical_view.camera_pose.position, dirs_world.shape)
    _, _, _, normals_world = raycast_batch(canonical_scene, origins, dirs_world)
    expected = (normals_world @ rot).reshape(canonical_view.normals.shape)
    hit = canonical_view.depth > 0
    assert np.abs(canonical_view.normals[hit] - expected[hit]).max() < 1e-9


def test_fronto_parallel_plane_normals():
    """A plane filling the image fronto-parallel renders normals (0,0,-1)."""
    mesh = gm.make_plane(5.0, 5.0)
    import graspmap.geom as geo
    # plane at y = 0.5 facing -y; camera looks along +y from origin
    pose_obj = gm.Pose([0, 0.5, 0], geo.quat_from_axis_angle([1, 0, 0], -np.pi / 2))
    acc = AcceleratedScene(Scene([(mesh, pose_obj)], ground_plane=False))
    intr = gm.Intrinsics(73.9, 73.9, 32, 32, 64, 64)
    cam = gm.look_at([0, -0.5, 0], [0, 0.5, 0])
    view = render_view(acc, cam, intr)
    assert (view.segmentation == 1).all()
    assert np.abs(view.normals - np.array([0, 0, -1.0])).max() < 1e-9


def test_planar_depth_of_analytic_plane():
    """Depth of a wall z_cam = c is constant (planar-depth convention)."""
    mesh = gm.make_plane(5.0, 5.0)
    import graspmap.geom as geo
    pose_obj = gm.Pose([0, 1.25, 0], geo.quat_from_axis_angle([1, 0, 0], -np.pi / 2))
    acc = AcceleratedScene(Scene([(mesh, pose_obj)], ground_plane=False))
    intr = gm.Intrinsics(73.9, 73.9, 32, 32, 64, 64)
    cam = gm.look_at([0, -0.5, 0], [0, 1.0, 0])
    view = render_view(acc, cam, intr)
    assert np.abs(view.depth - 1.75).max() < 1e-6


def test_render_deterministic(canonical_scene, desk_intrinsics):
    pose = gm.look_at([0.1, 0.45, 0.3], [0, 0, 0.15])
    v1 = render_view(canonical_scene, pose, desk_intrinsics)
    v2 = render_view(canonical_scene, pose, desk_intrinsics)
    assert np.array_equal(v1.rgb, v2.rgb)
    assert np.array_equal(v1.depth, v2.depth)
    assert np.array_equal(v1.segmentation, v2.segmentation)
    assert np.array_equal(v1.normals, v2.normals)


def test_ground_plane_rendered(canonical_scene, desk_intrinsics):
    pose = gm.look_at([0, 0.5, 0.4], [0, 0, 0.1])
    view = render_view(canonical_scene, pose, desk_intrinsics)
    assert (view.segmentation == GROUND_OBJECT_ID).any()
    assert (view.segmentation == 1).any()

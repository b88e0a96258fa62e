import numpy as np
import pytest

import graspmap as gm
from graspmap.raycast import warmup_kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    """Compile (or load cached) numba kernels once per session."""
    warmup_kernels()


@pytest.fixture(scope="session")
def canonical_scene():
    """Standing cylinder r=0.04, h=0.30 on the ground plane, axis through origin."""
    mesh = gm.make_cylinder(0.04, 0.30, 128, object_id=1)
    scene = gm.Scene(ground_plane=True).add(mesh, gm.Pose([0.0, 0.0, 0.15]))
    return gm.AcceleratedScene(scene)


@pytest.fixture(scope="session")
def desk_intrinsics():
    """Square 64x64 desk-test camera with the paper camera's vertical FOV."""
    return gm.Intrinsics(73.9, 73.9, 32.0, 32.0, 64, 64)


@pytest.fixture(scope="session")
def canonical_view(canonical_scene, desk_intrinsics):
    """Straight-on equatorial view: camera at (0, 0.5, 0.15) looking at the axis."""
    pose = gm.look_at([0.0, 0.5, 0.15], [0.0, 0.0, 0.15])
    return gm.render_view(canonical_scene, pose, desk_intrinsics)


@pytest.fixture(scope="session")
def default_gripper():
    return gm.GripperModel()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)

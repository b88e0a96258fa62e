"""graspmap: synthetic RGB-D grasp perception toolkit.

Renders RGB-D views of mesh scenes from a sampled camera grid, labels object
pixels by simulated parallel-jaw grasp attempts, recovers surface normals from
depth, predicts/selects grasp pixels and emits 6-DoF grasp commands.
"""

from .camera import (CameraGridSpec, Intrinsics, back_project, project,
                     sample_camera_grid, spot_hand_intrinsics)
from .d2nt import depth_to_normals
from .errors import (DataFormatError, EmptyMaskError, NoViablePixelError,
                     ValidationError)
from .geom import Pose, look_at, quat_from_euler_zyx
from .grasp import (GraspConfig, GraspOutcome, GraspPose, GripperModel,
                    attempt_grasp, generate_dataset, label_view, plan_grasp_pose)
from .mesh import (TriangleMesh, load_obj, make_box, make_cylinder, make_plane,
                   make_primitive, make_sphere)
from .pipeline import (GraspCommand, PipelineConfig, grasp_orientation_from_normal,
                       run_pipeline)
from .predict import EvalMetrics, evaluate, predict_quality, select_grasp_pixel
from .raycast import (GROUND_OBJECT_ID, AcceleratedScene, RayHit, Scene, build_bvh,
                      raycast, raycast_batch, raycast_batch_brute)
from .render import ViewSample, render_view

__version__ = "0.1.0"

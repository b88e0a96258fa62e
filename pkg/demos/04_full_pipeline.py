"""End to end: generate a labeled dataset, evaluate predictors, emit a command.

Equivalent CLI session:

    graspmap generate --config demos/scene_cylinder.json --out demos/output/dataset
    graspmap eval --dataset demos/output/dataset --predictor oracle \
        --threshold 0.85 --report demos/output/report.json
    graspmap infer --view demos/output/dataset/views/view_0000 \
        --predictor heuristic --out demos/output/grasp.json
"""

import json
import os

import numpy as np

import graspmap as gm
from graspmap.pipeline import PipelineConfig, run_pipeline, write_grasp_command

HERE = os.path.dirname(__file__)
OUT = os.path.join(HERE, "output")


def main():
    cfg = json.load(open(os.path.join(HERE, "scene_cylinder.json")))
    from graspmap import config as cfgmod
    scene = cfgmod.build_scene(cfg, base_dir=HERE)
    grid = cfgmod.grid_from_config(cfg)
    intr = cfgmod.intrinsics_from_config(cfg)
    gripper = cfgmod.gripper_from_config(cfg)

    ds = os.path.join(OUT, "dataset")
    manifest = gm.generate_dataset(scene, grid, gripper, intr, ds,
                                   stride=int(cfg["stride"]), target_id=1,
                                   look_target=cfg["look_target"],
                                   max_views=8, scene_config=cfg)
    print(f"generated {len(manifest['views'])} labeled views in {ds}")

    # score the built-in predictors against the ground-truth labels
    from graspmap.dataset_io import read_view
    from graspmap.predict import evaluate, predict_quality
    for predictor in ("oracle", "heuristic"):
        ms = []
        for rec in manifest["views"]:
            view, labels, _ = read_view(os.path.join(ds, rec["dir"]))
            if labels is None or not (labels != -1).any():
                continue
            q = predict_quality(view, predictor, labels=labels)
            ms.append(evaluate(q, labels, threshold=0.85))
        print(f"{predictor}: mean precision "
              f"{np.mean([m.precision for m in ms]):.3f}, mean recall "
              f"{np.mean([m.recall for m in ms]):.3f} over {len(ms)} views")

    # run the full pipeline on the first view and emit the grasp command
    result = run_pipeline(os.path.join(ds, manifest["views"][0]["dir"]),
                          PipelineConfig(predictor="oracle"))
    path = os.path.join(OUT, "grasp.json")
    write_grasp_command(path, result.command)
    c = result.command
    print(f"grasp command: position {np.round(c.position, 4)} m, pixel "
          f"({c.pixel[0]:.1f}, {c.pixel[1]:.1f}), q = {c.q_value:.2f}, aperture "
          f"{c.aperture} m, max torque {c.max_torque} Nm -> {path}")


if __name__ == "__main__":
    main()

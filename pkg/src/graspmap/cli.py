"""Command-line surface.

Subcommands: generate, normals, infer, eval, bench.
Exit codes: 0 success, 2 validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import config as cfgmod
from .camera import CameraGridSpec, Intrinsics
from .d2nt import depth_to_normals
from .dataset_io import (read_manifest, read_pfm, read_view, write_json, write_pfm)
from .errors import DataFormatError, ValidationError
from .grasp import generate_dataset
from .pipeline import PipelineConfig, run_pipeline, write_grasp_command
from .predict import evaluate, predict_quality, target_mask


def _parse_predictor(spec: str):
    if spec in ("heuristic", "oracle"):
        return spec, None
    if spec.startswith("heatmap:"):
        path = spec.split(":", 1)[1]
        if not path:
            raise ValidationError("heatmap predictor needs a path: heatmap:PATH")
        return "heatmap", path
    raise ValidationError(
        f"unknown predictor {spec!r}; use heuristic, oracle or heatmap:PATH")


def _parse_res(spec: str):
    try:
        w, h = spec.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise ValidationError(f"--res expects WxH, got {spec!r}") from None


def _heatmap_for_view(base_path: str, index: int) -> str:
    """Per-view heatmap lookup: a directory of heatmap_NNNN.pfm, or one file."""
    if os.path.isdir(base_path):
        return os.path.join(base_path, f"heatmap_{index:04d}.pfm")
    return base_path


def cmd_generate(args):
    cfg = cfgmod.load_scene_config(args.config)
    scene = cfgmod.build_scene(cfg, base_dir=os.path.dirname(os.path.abspath(args.config)))
    grid = cfgmod.grid_from_config(cfg)
    if args.seed is not None:
        grid = CameraGridSpec.from_dict({**grid.to_dict(), "seed": args.seed})
    intr = cfgmod.intrinsics_from_config(cfg)
    if args.res:
        w, h = _parse_res(args.res)
        intr = intr.scaled(w, h)
    stride = args.stride if args.stride is not None else int(cfg.get("stride", 1))
    gripper = cfgmod.gripper_from_config(cfg)
    manifest = generate_dataset(
        scene, grid, gripper, intr, args.out, stride=stride,
        target_id=int(cfg.get("target_object_id", 1)),
        look_target=cfg.get("look_target", (0.0, 0.0, 0.0)),
        config=cfgmod.grasp_config_from_config(cfg),
        max_views=args.views, scene_config=cfg,
        progress=(lambda i, n: print(f"view {i + 1}/{n}", file=sys.stderr))
        if args.verbose else None)
    print(f"wrote {len(manifest['views'])} views to {args.out}")
    return 0


def cmd_normals(args):
    depth = read_pfm(args.depth).astype(np.float64)
    with open(args.intrinsics, "r", encoding="utf-8") as fh:
        intr = Intrinsics.from_dict(json.load(fh))
    normals = depth_to_normals(depth, intr)
    write_pfm(args.out, normals.astype(np.float32))
    print(f"wrote {args.out}")
    return 0


def cmd_infer(args):
    predictor, heatmap_path = _parse_predictor(args.predictor)
    config = PipelineConfig(predictor=predictor, heatmap_path=heatmap_path,
                            threshold=args.threshold)
    result = run_pipeline(args.view, config, mask_path=args.mask)
    write_grasp_command(args.out, result.command)
    c = result.command
    print(f"grasp at ({c.position[0]:.4f}, {c.position[1]:.4f}, {c.position[2]:.4f}) m, "
          f"pixel ({c.pixel[0]:.1f}, {c.pixel[1]:.1f}), q = {c.q_value:.3f} "
          f"-> {args.out}")
    return 0


def cmd_eval(args):
    predictor, heatmap_path = _parse_predictor(args.predictor)
    manifest = read_manifest(args.dataset)
    per_view = []
    totals = np.zeros(4, dtype=np.int64)  # tp fp fn tn
    for rec in manifest["views"]:
        view, labels, _meta = read_view(os.path.join(args.dataset, rec["dir"]))
        if labels is None:
            raise DataFormatError(f"view {rec['index']} has no label map")
        if not (labels != -1).any():
            continue  # target absent from this view
        hp = _heatmap_for_view(heatmap_path, rec["index"]) if heatmap_path else None
        mask = target_mask(view, manifest.get("target_object_id"))
        q = predict_quality(view, predictor, labels=labels, heatmap_path=hp, mask=mask)
        m = evaluate(q, labels, args.threshold)
        totals += (m.tp, m.fp, m.fn, m.tn)
        per_view.append({"index": rec["index"], **m.to_dict()})
    if not per_view:
        raise ValidationError("dataset contains no labeled views")
    tp, fp, fn, tn = (int(x) for x in totals)
    from .d2nt import VARIANT as d2nt_variant
    report = {
        "dataset": os.path.abspath(args.dataset),
        "predictor": args.predictor,
        "threshold": args.threshold,
        "d2nt_variant": d2nt_variant,
        "num_views": len(per_view),
        "mean_precision": float(np.mean([v["precision"] for v in per_view])),
        "mean_recall": float(np.mean([v["recall"] for v in per_view])),
        "mean_iou": float(np.mean([v["iou"] for v in per_view])),
        "pooled": {"tp": tp, "fp": fp, "fn": fn, "tn": tn,
                   "precision": tp / (tp + fp) if tp + fp else 0.0,
                   "recall": tp / (tp + fn) if tp + fn else 0.0,
                   "iou": tp / (tp + fp + fn) if tp + fp + fn else 0.0},
        "positive_label_base_rate": (tp + fn) / max(tp + fp + fn + tn, 1),
        "per_view": per_view,
    }
    write_json(args.report, report)
    print(f"mean precision {report['mean_precision']:.4f}, "
          f"recall {report['mean_recall']:.4f}, iou {report['mean_iou']:.4f} "
          f"over {len(per_view)} views -> {args.report}")
    return 0


def cmd_bench(args):
    manifest = read_manifest(args.dataset)
    stages = {}
    n_runs = 0
    config = PipelineConfig(predictor="heuristic")
    for _ in range(args.repeat):
        for rec in manifest["views"]:
            vdir = os.path.join(args.dataset, rec["dir"])
            t0 = time.perf_counter()
            view, labels, _ = read_view(vdir)
            if labels is None or not (labels != -1).any():
                continue
            try:
                result = run_pipeline(view, config, labels=labels)
            except ValidationError:
                continue  # no viable pixel in this view
            timings = dict(result.timings)
            timings["load"] = time.perf_counter() - t0 - sum(
                v for k, v in timings.items() if k != "load")
            for k, v in timings.items():
                stages.setdefault(k, 0.0)
                stages[k] += v
            n_runs += 1
    if not n_runs:
        raise ValidationError("no usable views to benchmark")
    out = {"dataset": os.path.abspath(args.dataset), "runs": n_runs,
           "mean_stage_seconds": {k: v / n_runs for k, v in sorted(stages.items())},
           "mean_total_seconds": sum(stages.values()) / n_runs}
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="graspmap",
                                 description="Synthetic grasp-perception toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="render + grasp-label a camera-grid dataset")
    g.add_argument("--config", required=True, help="scene.json")
    g.add_argument("--out", required=True, help="output dataset directory")
    g.add_argument("--views", type=int, default=None, help="cap the number of views")
    g.add_argument("--stride", type=int, default=None, help="label stride (pixels)")
    g.add_argument("--seed", type=int, default=None, help="override the grid seed")
    g.add_argument("--res", default=None, help="override resolution, WxH")
    g.add_argument("--verbose", action="store_true")
    g.set_defaults(fn=cmd_generate)

    n = sub.add_parser("normals", help="depth PFM -> camera-frame normal PFM")
    n.add_argument("--depth", required=True)
    n.add_argument("--intrinsics", required=True, help="intrinsics JSON")
    n.add_argument("--out", required=True)
    n.set_defaults(fn=cmd_normals)

    i = sub.add_parser("infer", help="run the grasp pipeline on one view")
    i.add_argument("--view", required=True, help="view directory (from generate)")
    i.add_argument("--predictor", default="heuristic",
                   help="heuristic | oracle | heatmap:PATH")
    i.add_argument("--mask", default=None, help="external mask PNG (detector stand-in)")
    i.add_argument("--threshold", type=float, default=0.85)
    i.add_argument("--out", required=True, help="grasp command JSON")
    i.set_defaults(fn=cmd_infer)

    e = sub.add_parser("eval", help="score a predictor against dataset labels")
    e.add_argument("--dataset", required=True)
    e.add_argument("--predictor", required=True)
    e.add_argument("--threshold", type=float, default=0.85)
    e.add_argument("--report", required=True, help="report JSON path")
    e.set_defaults(fn=cmd_eval)

    b = sub.add_parser("bench", help="per-stage pipeline timings over a dataset")
    b.add_argument("--dataset", required=True)
    b.add_argument("--repeat", type=int, default=1)
    b.set_defaults(fn=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.fn(args)
    except DataFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

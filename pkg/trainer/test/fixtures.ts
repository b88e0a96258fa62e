/** Shared fixture: a tiny labeled dataset generated by the primary toolkit. */

import { execFileSync } from 'child_process';
import * as fs from 'fs';
import * as os from 'os';
import * as path from 'path';

export const REPO_ROOT = path.resolve(__dirname, '..', '..');

const SCENE = {
  objects: [{
    kind: 'cylinder',
    dimensions: { radius: 0.04, height: 0.3 },
    tessellation: 128,
    object_id: 1,
    pose: { position: [0.0, 0.0, 0.15] },
  }],
  ground_plane: true,
  target_object_id: 1,
  look_target: [0.0, 0.0, 0.15],
  grid: {
    x_count: 2, z_count: 1, x_range: [-0.1, 0.1], z_range: [0.15, 0.15],
    y_fixed: 0.5, seed: 11,
  },
  intrinsics: { fx: 36.95, fy: 36.95, u0: 16.0, v0: 16.0, width: 32, height: 32 },
  gripper: {},
  stride: 1,
};

export function runPrimary(args: string[]): string {
  return execFileSync('python3', ['-m', 'graspmap.cli', ...args], {
    cwd: REPO_ROOT,
    encoding: 'utf-8',
    stdio: ['ignore', 'pipe', 'pipe'],
  });
}

let cached: string | null = null;

/** Generate (once) a 2-view, fully labeled 32x32 cylinder dataset. */
export function tinyDataset(): string {
  if (cached) return cached;
  const root = fs.mkdtempSync(path.join(os.tmpdir(), 'graspmap-trainer-'));
  const cfg = path.join(root, 'scene.json');
  fs.writeFileSync(cfg, JSON.stringify(SCENE, null, 2));
  const out = path.join(root, 'dataset');
  runPrimary(['generate', '--config', cfg, '--out', out]);
  cached = out;
  return out;
}

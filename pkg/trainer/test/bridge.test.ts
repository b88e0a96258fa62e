/**
 * Bridge contract: heatmaps exported here must flow through the primary
 * toolkit's `infer --predictor heatmap:` and `eval` paths unmodified.
 */

import * as fs from 'fs';
import * as os from 'os';
import * as path from 'path';
import { beforeAll, describe, expect, it } from 'vitest';

import { initBackend } from '../src/backend.js';
import { exportHeatmaps } from '../src/export.js';
import { readManifest } from '../src/dataset.js';
import { readPfm } from '../src/pfm.js';
import { train } from '../src/train.js';
import { runPrimary, tinyDataset } from './fixtures.js';

beforeAll(async () => { await initBackend(); });

describe('trainer -> primary bridge', () => {
  it('exported heatmaps pass through eval and infer', async () => {
    const ds = tinyDataset();
    const out = fs.mkdtempSync(path.join(os.tmpdir(), 'bridge-'));
    const res = await train(ds, out, { steps: 30, seed: 9, logEvery: 0 });
    const manifest = readManifest(ds);
    const files = exportHeatmaps(res.model, ds, manifest, path.join(out, 'heatmaps'));
    expect(files.length).toBe(manifest.views.length);

    // exported values are probabilities, zero outside the mask, right size
    for (const f of files) {
      const hm = readPfm(f);
      expect(hm.width).toBe(manifest.intrinsics.width);
      expect(hm.height).toBe(manifest.intrinsics.height);
      for (const v of hm.data) {
        expect(v).toBeGreaterThanOrEqual(0);
        expect(v).toBeLessThanOrEqual(1);
      }
    }

    // eval over the heatmap directory
    const report = path.join(out, 'report.json');
    runPrimary(['eval', '--dataset', ds, '--predictor',
                `heatmap:${path.join(out, 'heatmaps')}`,
                '--threshold', '0.85', '--report', report]);
    const rep = JSON.parse(fs.readFileSync(report, 'utf-8'));
    expect(rep.num_views).toBe(manifest.views.length);
    expect(rep.mean_precision).toBeGreaterThanOrEqual(0);

    // infer on a single view with its exported heatmap
    const grasp = path.join(out, 'grasp.json');
    runPrimary(['infer', '--view', path.join(ds, 'views', 'view_0000'),
                '--predictor', `heatmap:${files[0]}`, '--out', grasp]);
    const cmd = JSON.parse(fs.readFileSync(grasp, 'utf-8'));
    expect(cmd.max_torque).toBe(3.0);
    expect(cmd.position.length).toBe(3);
  });
});

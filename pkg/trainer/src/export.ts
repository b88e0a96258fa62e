/**
 * Heatmap export: one single-channel float32 PFM per view, sigmoid-activated
 * and zeroed outside the view's target mask, named heatmap_NNNN.pfm - the
 * layout the primary toolkit's heatmap predictor consumes directly.
 */

import * as fs from 'fs';
import * as path from 'path';
import * as tf from '@tensorflow/tfjs';

import { Manifest, loadView } from './dataset.js';
import { writePfm } from './pfm.js';

export function exportHeatmaps(model: tf.LayersModel, datasetDir: string,
                               manifest: Manifest, outDir: string,
                               depthScale = 2.0): string[] {
  fs.mkdirSync(outDir, { recursive: true });
  const written: string[] = [];
  for (const rec of manifest.views) {
    const v = loadView(datasetDir, rec, manifest.target_object_id, depthScale);
    const q = tf.tidy(() => {
      const x = tf.tensor4d(v.input, [1, v.height, v.width, 8]);
      const logits = model.apply(x, { training: false }) as tf.Tensor4D;
      return tf.sigmoid(tf.reshape(logits, [v.height, v.width]));
    });
    const data = q.dataSync() as Float32Array;
    q.dispose();
    for (let i = 0; i < data.length; i++) {
      if (!v.mask[i]) data[i] = 0;
    }
    const file = path.join(outDir, `heatmap_${String(rec.index).padStart(4, '0')}.pfm`);
    writePfm(file, { width: v.width, height: v.height, channels: 1, data });
    written.push(file);
  }
  return written;
}

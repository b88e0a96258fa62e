/**
 * Training loop over a generated dataset: Adam on the masked BCE, cycling
 * through labeled views. Deterministic for a fixed seed (seeded initializers,
 * fixed view order); persists weight checkpoints plus a JSON training log.
 */

import * as fs from 'fs';
import * as path from 'path';
import * as tf from '@tensorflow/tfjs';

import { Manifest, ViewTensors, loadView, readManifest } from './dataset.js';
import { labelsTensor, countLabeled, maskedBce } from './loss.js';
import { ModelSpec, buildModel } from './model.js';

export interface TrainConfig {
  steps: number;
  learningRate: number;
  seed: number;
  depthScale: number;
  /** restrict training to one view index (overfit runs); null = all views */
  onlyView: number | null;
  logEvery: number;
}

export const DEFAULT_CONFIG: TrainConfig = {
  steps: 300,
  learningRate: 1e-3,
  seed: 42,
  depthScale: 2.0,
  onlyView: null,
  logEvery: 10,
};

export interface TrainResult {
  model: tf.LayersModel;
  losses: number[];
  manifest: Manifest;
  views: ViewTensors[];
}

export function loadLabeledViews(datasetDir: string, manifest: Manifest,
                                 cfg: TrainConfig): ViewTensors[] {
  const views: ViewTensors[] = [];
  for (const rec of manifest.views) {
    if (cfg.onlyView != null && rec.index !== cfg.onlyView) continue;
    const v = loadView(datasetDir, rec, manifest.target_object_id, cfg.depthScale);
    if (countLabeled(v.labels) > 0) views.push(v);
  }
  if (views.length === 0) throw new Error(`${datasetDir}: no labeled views to train on`);
  return views;
}

export async function train(datasetDir: string, outDir: string,
                            config: Partial<TrainConfig> = {}): Promise<TrainResult> {
  const cfg = { ...DEFAULT_CONFIG, ...config };
  const manifest = readManifest(datasetDir);
  const views = loadLabeledViews(datasetDir, manifest, cfg);
  const h = views[0].height;
  const w = views[0].width;

  const spec: ModelSpec = { height: h, width: w, seed: cfg.seed };
  const model = buildModel(spec);
  const optimizer = tf.train.adam(cfg.learningRate);

  const inputs = views.map((v) =>
    tf.tensor4d(v.input, [1, v.height, v.width, 8]));
  const labels = views.map((v) => labelsTensor(v.labels, v.height, v.width));

  const losses: number[] = [];
  for (let step = 0; step < cfg.steps; step++) {
    const k = step % views.length;
    const lossT = optimizer.minimize(
      () => maskedBce(model.apply(inputs[k], { training: true }) as tf.Tensor4D,
                      labels[k]),
      true) as tf.Scalar;
    const loss = (await lossT.data())[0];
    lossT.dispose();
    losses.push(loss);
    if (cfg.logEvery > 0 && step % cfg.logEvery === 0) {
      console.log(`step ${step}: loss ${loss.toFixed(5)}`);
    }
  }
  inputs.forEach((t) => t.dispose());
  labels.forEach((t) => t.dispose());

  fs.mkdirSync(outDir, { recursive: true });
  saveWeights(model, path.join(outDir, 'weights.bin'),
              path.join(outDir, 'weights.json'));
  const log = {
    dataset: path.resolve(datasetDir),
    config: cfg,
    input_shape: [h, w, 8],
    num_views: views.length,
    losses,
    final_loss: losses[losses.length - 1],
  };
  fs.writeFileSync(path.join(outDir, 'train_log.json'),
                   JSON.stringify(log, null, 2) + '\n');
  return { model, losses, manifest, views };
}

/** Weight checkpoint: raw float32 blob + a JSON of names/shapes in order. */
export function saveWeights(model: tf.LayersModel, binPath: string,
                            jsonPath: string): void {
  const weights = model.getWeights();
  const specs = model.weights.map((w, i) => ({
    name: w.name, shape: weights[i].shape, dtype: weights[i].dtype,
  }));
  const buffers: Buffer[] = [];
  for (const t of weights) {
    const data = t.dataSync() as Float32Array;
    buffers.push(Buffer.from(data.buffer.slice(
      data.byteOffset, data.byteOffset + data.byteLength)));
  }
  fs.writeFileSync(binPath, Buffer.concat(buffers));
  fs.writeFileSync(jsonPath, JSON.stringify({ weights: specs }, null, 2) + '\n');
}

export function loadWeights(model: tf.LayersModel, binPath: string,
                            jsonPath: string): void {
  const specs = JSON.parse(fs.readFileSync(jsonPath, 'utf-8')).weights as
    { name: string; shape: number[]; dtype: string }[];
  const blob = fs.readFileSync(binPath);
  const tensors: tf.Tensor[] = [];
  let off = 0;
  for (const s of specs) {
    const n = s.shape.reduce((a, b) => a * b, 1);
    const arr = new Float32Array(n);
    for (let i = 0; i < n; i++) arr[i] = blob.readFloatLE(off + 4 * i);
    off += 4 * n;
    tensors.push(tf.tensor(arr, s.shape));
  }
  model.setWeights(tensors);
  tensors.forEach((t) => t.dispose());
}

/**
 * Dataset access: reads manifest.json and per-view PNG/PFM files produced by
 * the generator and assembles the 8-channel network input
 * (RGB, depth, normals, mask) plus the {1, 0, -1} label map.
 */

import * as fs from 'fs';
import * as path from 'path';
import { decode } from 'fast-png';

import { readPfm } from './pfm.js';

export interface ViewRecord {
  index: number;
  dir: string;
}

export interface Manifest {
  format_version: number;
  target_object_id: number;
  stride: number;
  views: ViewRecord[];
  intrinsics: { width: number; height: number };
  [key: string]: unknown;
}

export interface ViewTensors {
  width: number;
  height: number;
  /** H*W*8 interleaved: r, g, b, depth01, nx, ny, nz, mask */
  input: Float32Array;
  /** H*W values in {-1, 0, 1} */
  labels: Int8Array;
  mask: Uint8Array;
  index: number;
}

export function readManifest(datasetDir: string): Manifest {
  const p = path.join(datasetDir, 'manifest.json');
  const manifest = JSON.parse(fs.readFileSync(p, 'utf-8')) as Manifest;
  if (manifest.format_version !== 1) {
    throw new Error(`unsupported manifest format_version ${manifest.format_version}`);
  }
  return manifest;
}

function decodePng(file: string) {
  return decode(fs.readFileSync(file));
}

/** Label PNG byte mapping: {255 -> 1, 0 -> 0, 128 -> -1}. */
export function decodeLabels(file: string): { labels: Int8Array; width: number; height: number } {
  const png = decodePng(file);
  const labels = new Int8Array(png.width * png.height);
  for (let i = 0; i < labels.length; i++) {
    const b = png.data[i];
    if (b === 255) labels[i] = 1;
    else if (b === 0) labels[i] = 0;
    else if (b === 128) labels[i] = -1;
    else throw new Error(`${file}: label byte ${b} outside {0, 128, 255}`);
  }
  return { labels, width: png.width, height: png.height };
}

export function loadView(datasetDir: string, rec: ViewRecord,
                         targetId: number, depthScale = 2.0): ViewTensors {
  const vdir = path.join(datasetDir, rec.dir);
  const rgb = decodePng(path.join(vdir, 'rgb.png'));
  const seg = decodePng(path.join(vdir, 'segmentation.png'));
  const depth = readPfm(path.join(vdir, 'depth.pfm'));
  const normals = readPfm(path.join(vdir, 'normals.pfm'));
  const { labels } = decodeLabels(path.join(vdir, 'labels.png'));

  const w = depth.width;
  const h = depth.height;
  if (rgb.width !== w || seg.width !== w || normals.width !== w) {
    throw new Error(`${vdir}: channel sizes disagree`);
  }
  const n = w * h;
  const mask = new Uint8Array(n);
  const segData = seg.data as Uint16Array | Uint8Array;
  for (let i = 0; i < n; i++) mask[i] = segData[i] === targetId ? 1 : 0;

  const rgbStep = rgb.channels >= 3 ? rgb.channels : 1;
  const input = new Float32Array(n * 8);
  for (let i = 0; i < n; i++) {
    const o = i * 8;
    input[o] = rgb.data[i * rgbStep] / 255;
    input[o + 1] = rgb.data[i * rgbStep + 1] / 255;
    input[o + 2] = rgb.data[i * rgbStep + 2] / 255;
    input[o + 3] = Math.min(1, Math.max(0, depth.data[i] / depthScale));
    // stored normals are already unit length or zero
    input[o + 4] = normals.data[i * 3];
    input[o + 5] = normals.data[i * 3 + 1];
    input[o + 6] = normals.data[i * 3 + 2];
    input[o + 7] = mask[i];
  }
  return { width: w, height: h, input, labels, mask, index: rec.index };
}

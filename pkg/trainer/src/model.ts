/**
 * Grasp-quality network: fully convolutional encoder-decoder.
 *
 * Encoder: MobileNetV2-style inverted-residual stages down to 1/16 resolution
 * (stem s2, then expansion-6 bottleneck stages 16/24/32/64/96).
 * Decoder: four transposed-convolution upsampling stages with skip
 * connections from the 1/8, 1/4 and 1/2 encoder features, group-normalized.
 * Head: 1x1 convolution producing a single-channel logit map at input
 * resolution. ~5.4M trainable parameters at the default widths, independent
 * of input size.
 */

import * as tf from '@tensorflow/tfjs';

import { groupNorm } from './groupnorm.js';

export interface ModelSpec {
  height: number;
  width: number;
  inputChannels?: number;   // rgb 3 + depth 1 + normals 3 + mask 1
  seed?: number;
  decoderWidths?: [number, number, number, number];
}

const DOWNSAMPLE = 16;

class Seeder {
  constructor(private next: number) {}
  take(): number { return this.next++; }
}

function convBnRelu(x: tf.SymbolicTensor, filters: number, stride: number,
                    seeds: Seeder, name: string): tf.SymbolicTensor {
  let y = tf.layers.conv2d({
    filters, kernelSize: 3, strides: stride, padding: 'same', useBias: false,
    kernelInitializer: tf.initializers.heNormal({ seed: seeds.take() }),
    name: `${name}_conv`,
  }).apply(x) as tf.SymbolicTensor;
  y = tf.layers.batchNormalization({ name: `${name}_bn` }).apply(y) as tf.SymbolicTensor;
  return tf.layers.reLU({ maxValue: 6, name: `${name}_relu` }).apply(y) as tf.SymbolicTensor;
}

function invertedResidual(x: tf.SymbolicTensor, inCh: number, outCh: number,
                          stride: number, expand: number, seeds: Seeder,
                          name: string): tf.SymbolicTensor {
  let y = x;
  const mid = inCh * expand;
  if (expand !== 1) {
    y = tf.layers.conv2d({
      filters: mid, kernelSize: 1, useBias: false,
      kernelInitializer: tf.initializers.heNormal({ seed: seeds.take() }),
      name: `${name}_expand`,
    }).apply(y) as tf.SymbolicTensor;
    y = tf.layers.batchNormalization({ name: `${name}_expand_bn` }).apply(y) as tf.SymbolicTensor;
    y = tf.layers.reLU({ maxValue: 6, name: `${name}_expand_relu` }).apply(y) as tf.SymbolicTensor;
  }
  y = tf.layers.depthwiseConv2d({
    kernelSize: 3, strides: stride, padding: 'same', useBias: false,
    depthwiseInitializer: tf.initializers.heNormal({ seed: seeds.take() }),
    name: `${name}_dw`,
  }).apply(y) as tf.SymbolicTensor;
  y = tf.layers.batchNormalization({ name: `${name}_dw_bn` }).apply(y) as tf.SymbolicTensor;
  y = tf.layers.reLU({ maxValue: 6, name: `${name}_dw_relu` }).apply(y) as tf.SymbolicTensor;
  y = tf.layers.conv2d({
    filters: outCh, kernelSize: 1, useBias: false,
    kernelInitializer: tf.initializers.heNormal({ seed: seeds.take() }),
    name: `${name}_project`,
  }).apply(y) as tf.SymbolicTensor;
  y = tf.layers.batchNormalization({ name: `${name}_project_bn` }).apply(y) as tf.SymbolicTensor;
  if (stride === 1 && inCh === outCh) {
    y = tf.layers.add({ name: `${name}_add` }).apply([x, y]) as tf.SymbolicTensor;
  }
  return y;
}

function decoderStage(x: tf.SymbolicTensor, skip: tf.SymbolicTensor | null,
                      filters: number, seeds: Seeder, name: string): tf.SymbolicTensor {
  let y = tf.layers.conv2dTranspose({
    filters, kernelSize: 3, strides: 2, padding: 'same', useBias: false,
    kernelInitializer: tf.initializers.heNormal({ seed: seeds.take() }),
    name: `${name}_up`,
  }).apply(x) as tf.SymbolicTensor;
  y = groupNorm({ name: `${name}_up_gn` }).apply(y) as tf.SymbolicTensor;
  y = tf.layers.reLU({ name: `${name}_up_relu` }).apply(y) as tf.SymbolicTensor;
  if (skip != null) {
    y = tf.layers.concatenate({ name: `${name}_cat` }).apply([y, skip]) as tf.SymbolicTensor;
  }
  y = tf.layers.conv2d({
    filters, kernelSize: 3, padding: 'same', useBias: false,
    kernelInitializer: tf.initializers.heNormal({ seed: seeds.take() }),
    name: `${name}_conv`,
  }).apply(y) as tf.SymbolicTensor;
  y = groupNorm({ name: `${name}_gn` }).apply(y) as tf.SymbolicTensor;
  return tf.layers.reLU({ name: `${name}_relu` }).apply(y) as tf.SymbolicTensor;
}

export function buildModel(spec: ModelSpec): tf.LayersModel {
  const { height, width } = spec;
  const inCh = spec.inputChannels ?? 8;
  if (height % DOWNSAMPLE !== 0 || width % DOWNSAMPLE !== 0) {
    throw new Error(`input ${height}x${width} not divisible by the encoder ` +
      `downsampling factor ${DOWNSAMPLE}`);
  }
  const seeds = new Seeder(spec.seed ?? 42);
  const dw = spec.decoderWidths ?? [432, 272, 168, 96];

  const input = tf.input({ shape: [height, width, inCh], name: 'view_input' });
  const stem = convBnRelu(input, 32, 2, seeds, 'stem');              // 1/2
  const b1 = invertedResidual(stem, 32, 16, 1, 1, seeds, 'b1_0');    // 1/2
  let b2 = invertedResidual(b1, 16, 24, 2, 6, seeds, 'b2_0');        // 1/4
  b2 = invertedResidual(b2, 24, 24, 1, 6, seeds, 'b2_1');
  let b3 = invertedResidual(b2, 24, 32, 2, 6, seeds, 'b3_0');        // 1/8
  b3 = invertedResidual(b3, 32, 32, 1, 6, seeds, 'b3_1');
  b3 = invertedResidual(b3, 32, 32, 1, 6, seeds, 'b3_2');
  let b4 = invertedResidual(b3, 32, 64, 2, 6, seeds, 'b4_0');        // 1/16
  b4 = invertedResidual(b4, 64, 64, 1, 6, seeds, 'b4_1');
  b4 = invertedResidual(b4, 64, 64, 1, 6, seeds, 'b4_2');
  b4 = invertedResidual(b4, 64, 64, 1, 6, seeds, 'b4_3');
  let b5 = invertedResidual(b4, 64, 96, 1, 6, seeds, 'b5_0');        // 1/16
  b5 = invertedResidual(b5, 96, 96, 1, 6, seeds, 'b5_1');
  b5 = invertedResidual(b5, 96, 96, 1, 6, seeds, 'b5_2');

  const d1 = decoderStage(b5, b3, dw[0], seeds, 'd1');               // 1/8
  const d2 = decoderStage(d1, b2, dw[1], seeds, 'd2');               // 1/4
  const d3 = decoderStage(d2, b1, dw[2], seeds, 'd3');               // 1/2
  const d4 = decoderStage(d3, null, dw[3], seeds, 'd4');             // 1/1

  const logits = tf.layers.conv2d({
    filters: 1, kernelSize: 1, padding: 'same',
    kernelInitializer: tf.initializers.glorotUniform({ seed: seeds.take() }),
    name: 'head',
  }).apply(d4) as tf.SymbolicTensor;

  return tf.model({ inputs: input, outputs: logits, name: 'grasp_quality_net' });
}

export function trainableParamCount(model: tf.LayersModel): number {
  let total = 0;
  for (const w of model.trainableWeights) {
    let n = 1;
    for (const dim of w.shape) n *= dim ?? 1;
    total += n;
  }
  return total;
}

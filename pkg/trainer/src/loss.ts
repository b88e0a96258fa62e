/**
 * Masked per-pixel binary cross-entropy over grasp labels.
 *
 * Labels are {1 success, 0 failure, -1 indeterminate}; -1 pixels contribute
 * zero loss and zero gradient, and the mean runs over the {0, 1} pixels only.
 * Computed from logits with the numerically stable formulation
 * max(x, 0) - x*z + log(1 + exp(-|x|)).
 */

import * as tf from '@tensorflow/tfjs';

export function countLabeled(labels: Int8Array | Float32Array | number[]): number {
  let n = 0;
  for (const v of labels) if (v >= 0) n++;
  return n;
}

/**
 * @param logits  [B, H, W, 1] float32
 * @param labels  [B, H, W] float32 holding -1, 0, 1
 */
export function maskedBce(logits: tf.Tensor4D, labels: tf.Tensor3D): tf.Scalar {
  return tf.tidy(() => {
    const x = tf.reshape(logits, labels.shape);
    const valid = tf.cast(tf.greaterEqual(labels, 0), 'float32');
    const nValid = tf.sum(valid);
    const z = tf.maximum(labels, 0);
    const perPixel = tf.add(
      tf.sub(tf.maximum(x, 0), tf.mul(x, z)),
      tf.log1p(tf.exp(tf.neg(tf.abs(x)))));
    return tf.div(tf.sum(tf.mul(perPixel, valid)), nValid) as tf.Scalar;
  });
}

/** Labels tensor from the dataset's Int8Array, with the all-(-1) guard. */
export function labelsTensor(labels: Int8Array, height: number,
                             width: number): tf.Tensor3D {
  if (countLabeled(labels) === 0) {
    throw new Error('masked loss is undefined: every pixel is labeled -1');
  }
  return tf.tensor3d(Float32Array.from(labels), [1, height, width]);
}

/**
 * Group normalization layer (NHWC): channels are split into groups and
 * normalized over (H, W, channels-in-group), then scaled/shifted by learned
 * per-channel gamma/beta. Batch-size independent, which is what the decoder
 * needs at batch size 1.
 */

import * as tf from '@tensorflow/tfjs';

export interface GroupNormArgs {
  groups?: number;
  epsilon?: number;
  name?: string;
}

export class GroupNormalization extends tf.layers.Layer {
  static className = 'GroupNormalization';
  private groups: number;
  private epsilon: number;
  private gamma: tf.LayerVariable | null = null;
  private beta: tf.LayerVariable | null = null;

  constructor(args: GroupNormArgs = {}) {
    super({ name: args.name });
    this.groups = args.groups ?? 8;
    this.epsilon = args.epsilon ?? 1e-5;
  }

  override build(inputShape: tf.Shape | tf.Shape[]): void {
    const shape = (Array.isArray(inputShape[0]) ? inputShape[0] : inputShape) as number[];
    const channels = shape[shape.length - 1];
    if (channels == null || channels % this.groups !== 0) {
      throw new Error(`GroupNormalization: ${channels} channels not divisible ` +
        `into ${this.groups} groups`);
    }
    this.gamma = this.addWeight('gamma', [channels], 'float32',
      tf.initializers.ones());
    this.beta = this.addWeight('beta', [channels], 'float32',
      tf.initializers.zeros());
    this.built = true;
  }

  override call(inputs: tf.Tensor | tf.Tensor[]): tf.Tensor {
    return tf.tidy(() => {
      const x = Array.isArray(inputs) ? inputs[0] : inputs;
      const [b, h, w, c] = x.shape as [number, number, number, number];
      const g = this.groups;
      const grouped = tf.reshape(x, [b, h, w, g, c / g]);
      const { mean, variance } = tf.moments(grouped, [1, 2, 4], true);
      const normed = tf.div(tf.sub(grouped, mean),
        tf.sqrt(tf.add(variance, this.epsilon)));
      const flat = tf.reshape(normed, [b, h, w, c]);
      return tf.add(tf.mul(flat, this.gamma!.read()), this.beta!.read());
    });
  }

  override computeOutputShape(inputShape: tf.Shape | tf.Shape[]): tf.Shape {
    return (Array.isArray(inputShape[0]) ? inputShape[0] : inputShape) as tf.Shape;
  }

  override getConfig(): tf.serialization.ConfigDict {
    const config = super.getConfig();
    return { ...config, groups: this.groups, epsilon: this.epsilon };
  }
}

tf.serialization.registerClass(GroupNormalization);

export function groupNorm(args: GroupNormArgs = {}): GroupNormalization {
  return new GroupNormalization(args);
}

/**
 * Training-gradient support for the wasm backend.
 *
 * The wasm backend ships inference kernels only: Conv2DBackpropFilter and the
 * depthwise backprop kernels are not registered, so tf.grad through conv
 * layers fails. This module re-registers the gradients of Conv2D,
 * DepthwiseConv2dNative and Conv2DBackpropInput (transposed conv) as
 * compositions of ops the backend does implement (pad, slice, avgPool
 * subsampling, matMul, depthwiseConv2d, reverse), which also keeps them
 * backend-agnostic. Restricted to NHWC, dilation 1 - all this model uses.
 */

import * as tf from '@tensorflow/tfjs';

type Pad = 'valid' | 'same' | number | tf.backend_util.ExplicitPadding;
type Strides = number | [number, number];

function normStrides(strides: Strides): [number, number] {
  return typeof strides === 'number' ? [strides, strides] : strides;
}

function convInfo(xShape: [number, number, number, number],
                  filterShape: [number, number, number, number],
                  strides: [number, number], pad: Pad) {
  return tf.backend_util.computeConv2DInfo(xShape, filterShape, strides, [1, 1],
                                           pad as never);
}

/** x[:, kh::s, kw::s, :] restricted to the conv's output grid. */
function shiftedPatches(xPadded: tf.Tensor4D, kh: number, kw: number,
                        outH: number, outW: number, s: number): tf.Tensor4D {
  const [b, , , c] = xPadded.shape;
  const span = (n: number) => (n - 1) * s + 1;
  const sl = tf.slice(xPadded, [0, kh, kw, 0], [b, span(outH), span(outW), c]);
  if (s === 1) return sl as tf.Tensor4D;
  return tf.avgPool(sl as tf.Tensor4D, 1, s, 'valid');
}

function padForFilterGrad(x: tf.Tensor4D, info: tf.backend_util.Conv2DInfo) {
  return tf.pad(x, [[0, 0], [info.padInfo.top, info.padInfo.bottom],
                    [info.padInfo.left, info.padInfo.right], [0, 0]]) as tf.Tensor4D;
}

/** dL/dW of a standard conv: 9 (KH*KW) shifted matmuls over flattened pixels. */
export function convFilterGrad(x: tf.Tensor4D, dy: tf.Tensor4D,
                               filterShape: [number, number, number, number],
                               stridesIn: Strides, pad: Pad): tf.Tensor4D {
  return tf.tidy(() => {
    const strides = normStrides(stridesIn);
    const [kh, kw, inC, outC] = filterShape;
    const info = convInfo(x.shape as [number, number, number, number],
                          filterShape, strides, pad);
    const [b, outH, outW] = [dy.shape[0], dy.shape[1], dy.shape[2]];
    const xp = padForFilterGrad(x, info);
    const dyFlat = tf.reshape(dy, [b * outH * outW, outC]);
    const pieces: tf.Tensor2D[] = [];
    for (let i = 0; i < kh; i++) {
      for (let j = 0; j < kw; j++) {
        const xs = shiftedPatches(xp, i, j, outH, outW, strides[0]);
        const xsFlat = tf.reshape(xs, [b * outH * outW, inC]);
        pieces.push(tf.matMul(xsFlat, dyFlat, true, false));
      }
    }
    return tf.reshape(tf.stack(pieces), [kh, kw, inC, outC]) as tf.Tensor4D;
  });
}

/** dL/dW of a depthwise conv (channel multiplier 1). */
export function depthwiseFilterGrad(x: tf.Tensor4D, dy: tf.Tensor4D,
                                    filterShape: [number, number, number, number],
                                    stridesIn: Strides, pad: Pad): tf.Tensor4D {
  return tf.tidy(() => {
    const strides = normStrides(stridesIn);
    const [kh, kw, inC, mult] = filterShape;
    if (mult !== 1) throw new Error('depthwise gradient: only multiplier 1 supported');
    const info = tf.backend_util.computeConv2DInfo(
      x.shape as [number, number, number, number], filterShape, strides, [1, 1],
      pad as never, undefined, true);
    const [outH, outW] = [dy.shape[1], dy.shape[2]];
    const xp = padForFilterGrad(x, info);
    const pieces: tf.Tensor1D[] = [];
    for (let i = 0; i < kh; i++) {
      for (let j = 0; j < kw; j++) {
        const xs = shiftedPatches(xp, i, j, outH, outW, strides[0]);
        pieces.push(tf.sum(tf.mul(xs, dy), [0, 1, 2]));
      }
    }
    return tf.reshape(tf.stack(pieces), [kh, kw, inC, 1]) as tf.Tensor4D;
  });
}

/** Insert (s-1) zeros between spatial samples. */
function zeroUpsample(t: tf.Tensor4D, s: number): tf.Tensor4D {
  if (s === 1) return t;
  const [b, h, w, c] = t.shape;
  const up = tf.reshape(
    tf.pad(tf.reshape(t, [b, h, 1, w, 1, c]),
           [[0, 0], [0, 0], [0, s - 1], [0, 0], [0, s - 1], [0, 0]]),
    [b, h * s, w * s, c]);
  return tf.slice(up, [0, 0, 0, 0],
                  [b, (h - 1) * s + 1, (w - 1) * s + 1, c]) as tf.Tensor4D;
}

/** dL/dx of a depthwise conv: correlate the strided cotangent with rot180(W). */
export function depthwiseInputGrad(dy: tf.Tensor4D, filter: tf.Tensor4D,
                                   xShape: [number, number, number, number],
                                   stridesIn: Strides, pad: Pad): tf.Tensor4D {
  return tf.tidy(() => {
    const strides = normStrides(stridesIn);
    const [kh, kw, , mult] = filter.shape;
    if (mult !== 1) throw new Error('depthwise gradient: only multiplier 1 supported');
    const info = tf.backend_util.computeConv2DInfo(
      xShape, filter.shape as [number, number, number, number], strides, [1, 1],
      pad as never, undefined, true);
    const s = strides[0];
    const dyU = zeroUpsample(dy, s);
    const padTop = kh - 1 - info.padInfo.top;
    const padLeft = kw - 1 - info.padInfo.left;
    const padBottom = xShape[1] + kh - 1 - dyU.shape[1] - padTop;
    const padRight = xShape[2] + kw - 1 - dyU.shape[2] - padLeft;
    const dyP = tf.pad(dyU, [[0, 0], [padTop, padBottom], [padLeft, padRight],
                             [0, 0]]) as tf.Tensor4D;
    const wFlipped = tf.reverse(filter, [0, 1]) as tf.Tensor4D;
    return tf.depthwiseConv2d(dyP, wFlipped, 1, 'valid');
  });
}

let installed = false;

/**
 * Register the backward-conv kernels the wasm backend is missing, implemented
 * as compositions of ops it does have. Core's existing gradient functions
 * (including the fused-conv customGrad paths the layers library uses) then
 * work unchanged. Idempotent; a no-op for backends that ship these kernels.
 */
export function installTrainingGradients(): void {
  if (installed) return;
  installed = true;

  const register = (kernelName: string,
                    kernelFunc: (p: { inputs: Record<string, tf.Tensor>;
                                      attrs: Record<string, unknown> }) => tf.Tensor) => {
    tf.registerKernel({
      kernelName,
      backendName: 'wasm',
      kernelFunc: (({ inputs, attrs }: { inputs: Record<string, tf.Tensor>;
                                         attrs: Record<string, unknown> }) =>
        kernelFunc({ inputs, attrs })) as never,
    });
  };

  register('Conv2DBackpropFilter', ({ inputs, attrs }) => {
    const { x, dy } = inputs as { x: tf.Tensor4D; dy: tf.Tensor4D };
    const a = attrs as { strides: Strides; pad: Pad;
                         filterShape: [number, number, number, number] };
    return convFilterGrad(x, dy, a.filterShape, a.strides, a.pad);
  });

  register('DepthwiseConv2dNativeBackpropFilter', ({ inputs, attrs }) => {
    const { x, dy } = inputs as { x: tf.Tensor4D; dy: tf.Tensor4D };
    const a = attrs as { strides: Strides; pad: Pad;
                         filterShape: [number, number, number, number] };
    return depthwiseFilterGrad(x, dy, a.filterShape, a.strides, a.pad);
  });

  register('DepthwiseConv2dNativeBackpropInput', ({ inputs, attrs }) => {
    const { dy, filter } = inputs as { dy: tf.Tensor4D; filter: tf.Tensor4D };
    const a = attrs as { strides: Strides; pad: Pad;
                         inputShape: [number, number, number, number] };
    return depthwiseInputGrad(dy, filter, a.inputShape, a.strides, a.pad);
  });
}

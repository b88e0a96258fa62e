import * as tf from '@tensorflow/tfjs';
import '@tensorflow/tfjs-backend-wasm';

import { installTrainingGradients } from './wasm_grads.js';

let ready: Promise<string> | null = null;

/** Prefer the wasm backend (SIMD), falling back to the pure-JS cpu kernels. */
export function initBackend(): Promise<string> {
  if (!ready) {
    ready = (async () => {
      installTrainingGradients();
      try {
        if (await tf.setBackend('wasm')) {
          await tf.ready();
          return 'wasm';
        }
      } catch {
        // fall through to cpu
      }
      await tf.setBackend('cpu');
      await tf.ready();
      return 'cpu';
    })();
  }
  return ready;
}

/**
 * Minimal command line:
 *   node dist/cli.js train  --dataset DIR --out DIR [--steps N] [--lr R]
 *                           [--seed K] [--only-view I]
 *   node dist/cli.js export --dataset DIR --weights DIR --out DIR
 *
 * `train` also exports heatmaps for the training dataset into OUT/heatmaps.
 */

import * as path from 'path';

import { initBackend } from './backend.js';
import { exportHeatmaps } from './export.js';
import { buildModel } from './model.js';
import { loadLabeledViews, loadWeights, train, DEFAULT_CONFIG } from './train.js';
import { readManifest } from './dataset.js';

function parseArgs(argv: string[]): Map<string, string> {
  const args = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    if (!argv[i].startsWith('--') || i + 1 >= argv.length) {
      throw new Error(`malformed arguments near ${argv[i]}`);
    }
    args.set(argv[i].slice(2), argv[i + 1]);
  }
  return args;
}

function required(args: Map<string, string>, key: string): string {
  const v = args.get(key);
  if (!v) throw new Error(`missing --${key}`);
  return v;
}

async function main(): Promise<number> {
  const [cmd, ...rest] = process.argv.slice(2);
  const args = parseArgs(rest);
  const backend = await initBackend();
  console.log(`backend: ${backend}`);

  if (cmd === 'train') {
    const dataset = required(args, 'dataset');
    const out = required(args, 'out');
    const result = await train(dataset, out, {
      steps: args.has('steps') ? Number(args.get('steps')) : DEFAULT_CONFIG.steps,
      learningRate: args.has('lr') ? Number(args.get('lr')) : DEFAULT_CONFIG.learningRate,
      seed: args.has('seed') ? Number(args.get('seed')) : DEFAULT_CONFIG.seed,
      onlyView: args.has('only-view') ? Number(args.get('only-view')) : null,
    });
    const files = exportHeatmaps(result.model, dataset, result.manifest,
                                 path.join(out, 'heatmaps'));
    console.log(`final loss ${result.losses[result.losses.length - 1].toFixed(5)}; ` +
                `wrote ${files.length} heatmaps and checkpoints to ${out}`);
    return 0;
  }

  if (cmd === 'export') {
    const dataset = required(args, 'dataset');
    const weightsDir = required(args, 'weights');
    const out = required(args, 'out');
    const manifest = readManifest(dataset);
    const views = loadLabeledViews(dataset, manifest,
                                   { ...DEFAULT_CONFIG, onlyView: null });
    const model = buildModel({ height: views[0].height, width: views[0].width });
    loadWeights(model, path.join(weightsDir, 'weights.bin'),
                path.join(weightsDir, 'weights.json'));
    const files = exportHeatmaps(model, dataset, manifest, out);
    console.log(`wrote ${files.length} heatmaps to ${out}`);
    return 0;
  }

  console.error('usage: cli.js {train|export} --dataset DIR ... (see source)');
  return 2;
}

main().then((code) => { process.exitCode = code; },
            (err) => { console.error(err.message); process.exitCode = 1; });

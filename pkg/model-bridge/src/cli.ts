// Command line entry: train, infer, average-faces.

import * as path from 'path';
import { parseArgs } from 'node:util';
import { writeAtomic } from './csv';
import { encodePng } from './image';
import { averageFaces, bandIndexFromLabel } from './average';
import { inferManifest, writePredictionFiles } from './infer';
import { loadCheckpoint } from './model';
import { train, TRAIN_DEFAULTS, TrainSpec } from './train';

const USAGE = `usage:
  model-bridge train --manifest <csv> --image-root <dir> --out <dir>
      [--input-size 224] [--epochs 10] [--learning-rate 0.001]
      [--batch-size 16] [--seed 0] [--base-model <dir>]
      [--freeze-backbone] [--class-weights]
  model-bridge infer --model <dir> --manifest <csv> --image-root <dir> --out <dir>
      [--input-size 224] [--batch-size 32]
  model-bridge average-faces --manifest <csv> --image-root <dir> --band "[16-17]" --out <dir>
      [--halves]`;

function intOption(value: string | undefined, fallback: number, name: string): number {
  if (value === undefined) return fallback;
  const parsed = Number(value);
  if (!Number.isInteger(parsed) || parsed <= 0) {
    throw new RangeError(`--${name} must be a positive integer, got ${value}`);
  }
  return parsed;
}

function seedOption(value: string | undefined): number {
  if (value === undefined) return TRAIN_DEFAULTS.seed;
  const parsed = Number(value);
  if (!Number.isInteger(parsed) || parsed < 0) {
    throw new RangeError(`--seed must be a non-negative integer, got ${value}`);
  }
  return parsed;
}

function required(value: string | undefined, name: string): string {
  if (value === undefined) throw new RangeError(`--${name} is required`);
  return value;
}

async function runTrain(argv: string[]): Promise<void> {
  const { values } = parseArgs({
    args: argv,
    options: {
      manifest: { type: 'string' },
      'image-root': { type: 'string' },
      out: { type: 'string' },
      'input-size': { type: 'string' },
      epochs: { type: 'string' },
      'learning-rate': { type: 'string' },
      'batch-size': { type: 'string' },
      seed: { type: 'string' },
      'base-model': { type: 'string' },
      'freeze-backbone': { type: 'boolean', default: false },
      'class-weights': { type: 'boolean', default: false },
    },
  });
  const learningRate = values['learning-rate'] === undefined ? TRAIN_DEFAULTS.learningRate : Number(values['learning-rate']);
  if (!Number.isFinite(learningRate) || learningRate <= 0) {
    throw new RangeError(`--learning-rate must be positive, got ${values['learning-rate']}`);
  }
  const spec: TrainSpec = {
    manifestPath: required(values.manifest, 'manifest'),
    imageRoot: required(values['image-root'], 'image-root'),
    outDir: required(values.out, 'out'),
    inputSize: intOption(values['input-size'], TRAIN_DEFAULTS.inputSize, 'input-size'),
    backbone: TRAIN_DEFAULTS.backbone,
    epochs: intOption(values.epochs, TRAIN_DEFAULTS.epochs, 'epochs'),
    learningRate,
    batchSize: intOption(values['batch-size'], TRAIN_DEFAULTS.batchSize, 'batch-size'),
    seed: seedOption(values.seed),
    baseModelDir: values['base-model'],
    freeze: values['freeze-backbone'] ?? false,
    classWeights: values['class-weights'] ?? false,
  };
  const result = await train(spec);
  const last = result.epochs[result.epochs.length - 1];
  console.log(`saved ${spec.outDir} (final train acc ${last.trainAccuracy.toFixed(3)})`);
}

async function runInfer(argv: string[]): Promise<void> {
  const { values } = parseArgs({
    args: argv,
    options: {
      model: { type: 'string' },
      manifest: { type: 'string' },
      'image-root': { type: 'string' },
      out: { type: 'string' },
      'input-size': { type: 'string' },
      'batch-size': { type: 'string' },
    },
  });
  const model = await loadCheckpoint(required(values.model, 'model'));
  const predictions = await inferManifest(
    model,
    required(values.manifest, 'manifest'),
    required(values['image-root'], 'image-root'),
    intOption(values['input-size'], TRAIN_DEFAULTS.inputSize, 'input-size'),
    intOption(values['batch-size'], 32, 'batch-size'),
  );
  const outDir = required(values.out, 'out');
  writePredictionFiles(predictions, outDir);
  console.log(`wrote ${path.join(outDir, 'predictions.csv')}`);
  console.log(`wrote ${path.join(outDir, 'ds13k_probs.csv')}`);
}

async function runAverageFaces(argv: string[]): Promise<void> {
  const { values } = parseArgs({
    args: argv,
    options: {
      manifest: { type: 'string' },
      'image-root': { type: 'string' },
      band: { type: 'string' },
      out: { type: 'string' },
      halves: { type: 'boolean', default: false },
    },
  });
  const bandIndex = bandIndexFromLabel(required(values.band, 'band'));
  const faces = averageFaces(
    required(values.manifest, 'manifest'),
    required(values['image-root'], 'image-root'),
    bandIndex,
    values.halves ?? false,
  );
  const outDir = required(values.out, 'out');
  for (const face of faces) {
    const name = face.label.replace(/[\[\]]/g, '').replace(' half ', '_half') + '.png';
    const filePath = path.join(outDir, `avg_${name}`);
    writeAtomic(filePath, encodePng(face.image));
    console.log(`wrote ${filePath}`);
  }
}

async function main(): Promise<void> {
  const [command, ...rest] = process.argv.slice(2);
  if (command === 'train') return runTrain(rest);
  if (command === 'infer') return runInfer(rest);
  if (command === 'average-faces') return runAverageFaces(rest);
  if (command === '--help' || command === 'help') {
    console.log(USAGE);
    return;
  }
  console.error(USAGE);
  process.exitCode = 1;
}

main().catch(e => {
  console.error(`model-bridge: ${e.name ?? 'Error'}: ${e.message}`);
  process.exitCode = 1;
});

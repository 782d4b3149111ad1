// Fine-tuning run: seeded split, optional warm start from an existing
// checkpoint, optional frozen backbone, per-epoch train/test accuracy log.

import * as fs from 'fs';
import * as path from 'path';
import * as tf from '@tensorflow/tfjs';
import { formatReal, parseManifest, writeAtomic } from './csv';
import { loadImages, requireAllBands, splitBySubject, toTensors } from './data';
import { Backbone, buildModel, freezeBackbone, loadCheckpoint, saveCheckpoint } from './model';

export interface TrainSpec {
  manifestPath: string;
  imageRoot: string;
  outDir: string;
  inputSize: number; // protocol value 224; smaller for smoke runs
  backbone: Backbone;
  epochs: number;
  learningRate: number;
  batchSize: number;
  seed: number;
  baseModelDir?: string; // warm-start checkpoint (transfer learning)
  freeze: boolean; // train the head only
  classWeights: boolean; // inverse-frequency weights; off by default
}

export const TRAIN_DEFAULTS = {
  inputSize: 224,
  backbone: 'smallconv' as Backbone,
  epochs: 10,
  learningRate: 0.001,
  batchSize: 16,
  seed: 0,
  freeze: false,
  classWeights: false,
};

export interface EpochStats {
  epoch: number;
  trainLoss: number;
  trainAccuracy: number;
  testLoss: number;
  testAccuracy: number;
}

export interface TrainResult {
  epochs: EpochStats[];
  trainCount: number;
  testCount: number;
}

function inverseFrequencyWeights(bandCounts: Map<number, number>, total: number): { [c: number]: number } {
  const weights: { [c: number]: number } = {};
  for (const [band, count] of bandCounts) {
    weights[band] = total / (bandCounts.size * count);
  }
  return weights;
}

export async function train(spec: TrainSpec): Promise<TrainResult> {
  const rows = parseManifest(fs.readFileSync(spec.manifestPath, 'utf-8'));
  const split = splitBySubject(rows, spec.seed);
  requireAllBands(split.train);

  console.log(`train ${split.train.length} / test ${split.test.length} subjects`);
  const trainImages = loadImages(split.train, spec.imageRoot, spec.inputSize);
  const testImages = loadImages(split.test, spec.imageRoot, spec.inputSize);
  const trainSet = toTensors(split.train, trainImages, spec.inputSize);
  const testSet = toTensors(split.test, testImages, spec.inputSize);

  const model = spec.baseModelDir
    ? await loadCheckpoint(spec.baseModelDir)
    : buildModel(spec.inputSize, spec.backbone, spec.seed);
  if (spec.freeze) freezeBackbone(model);
  model.compile({
    optimizer: tf.train.adam(spec.learningRate),
    loss: 'categoricalCrossentropy',
    metrics: ['accuracy'],
  });

  let classWeight: { [c: number]: number } | undefined;
  if (spec.classWeights) {
    const counts = new Map<number, number>();
    for (const row of split.train) counts.set(row.bandIndex, (counts.get(row.bandIndex) ?? 0) + 1);
    classWeight = inverseFrequencyWeights(counts, split.train.length);
  }

  const stats: EpochStats[] = [];
  const history = await model.fit(trainSet.x, trainSet.y, {
    epochs: spec.epochs,
    batchSize: spec.batchSize,
    validationData: [testSet.x, testSet.y],
    shuffle: false,
    verbose: 0,
    classWeight,
    callbacks: {
      onEpochEnd: async (epoch, logs) => {
        const entry = {
          epoch: epoch + 1,
          trainLoss: logs?.loss ?? NaN,
          trainAccuracy: logs?.acc ?? NaN,
          testLoss: logs?.val_loss ?? NaN,
          testAccuracy: logs?.val_acc ?? NaN,
        };
        stats.push(entry);
        console.log(
          `epoch ${entry.epoch}/${spec.epochs}` +
            ` loss ${entry.trainLoss.toFixed(4)} acc ${entry.trainAccuracy.toFixed(3)}` +
            ` test_acc ${entry.testAccuracy.toFixed(3)}`,
        );
      },
    },
  });
  void history;

  await saveCheckpoint(model, spec.outDir);
  const logLines = ['epoch,train_loss,train_accuracy,test_loss,test_accuracy'];
  for (const s of stats) {
    logLines.push(
      [s.epoch, formatReal(s.trainLoss), formatReal(s.trainAccuracy), formatReal(s.testLoss), formatReal(s.testAccuracy)].join(','),
    );
  }
  writeAtomic(path.join(spec.outDir, 'training_log.csv'), logLines.join('\n') + '\n');

  trainSet.x.dispose();
  trainSet.y.dispose();
  testSet.x.dispose();
  testSet.y.dispose();
  return { epochs: stats, trainCount: split.train.length, testCount: split.test.length };
}

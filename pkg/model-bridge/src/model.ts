// Backbone + 5-way softmax head. The backbone is a small convolutional
// stack; "pretrained" means warm-starting from any saved checkpoint of
// the same topology (the published DEX weights are not redistributable,
// and the contract here is the head and the export schema, not specific
// weights). Backbone layers carry a name prefix so they can be frozen
// while the head fine-tunes.

import * as tf from '@tensorflow/tfjs';
import * as fs from 'fs';
import * as path from 'path';
import { BANDS, N_CLASSES } from './bands';
import { fileLoadHandler, fileSaveHandler } from './fileio';
import { SplitMix64 } from './rng';
import { ShapeMismatch } from './errors';

export const BACKBONES = ['smallconv'] as const;
export type Backbone = (typeof BACKBONES)[number];

// Layer initializers are seeded from the run seed so a rebuild with the
// same seed starts from identical weights.
export function buildModel(inputSize: number, backbone: Backbone, seed: number): tf.LayersModel {
  if (!BACKBONES.includes(backbone)) {
    throw new RangeError(`unknown backbone ${JSON.stringify(backbone)}`);
  }
  const seeds = new SplitMix64(seed);
  const layerSeed = () => Number(seeds.nextU64() % 2147483647n);
  const model = tf.sequential();
  const conv = (filters: number, first: boolean) =>
    tf.layers.conv2d({
      filters,
      kernelSize: 3,
      strides: 2,
      padding: 'same',
      activation: 'relu',
      kernelInitializer: tf.initializers.glorotUniform({ seed: layerSeed() }),
      name: `backbone_conv_${filters}`,
      ...(first ? { inputShape: [inputSize, inputSize, 3] } : {}),
    });
  model.add(conv(8, true));
  model.add(conv(16, false));
  model.add(conv(32, false));
  model.add(tf.layers.globalAveragePooling2d({ name: 'backbone_pool' }));
  model.add(
    tf.layers.dense({
      units: N_CLASSES,
      activation: 'softmax',
      kernelInitializer: tf.initializers.glorotUniform({ seed: layerSeed() }),
      name: 'head_dense',
    }),
  );
  return model;
}

export function freezeBackbone(model: tf.LayersModel): void {
  for (const layer of model.layers) {
    if (layer.name.startsWith('backbone_')) layer.trainable = false;
  }
}

export async function saveCheckpoint(model: tf.LayersModel, dir: string): Promise<void> {
  await model.save(fileSaveHandler(dir));
  fs.writeFileSync(path.join(dir, 'classes.txt'), BANDS.map(b => b.label).join('\n') + '\n');
}

export async function loadCheckpoint(dir: string): Promise<tf.LayersModel> {
  const classesPath = path.join(dir, 'classes.txt');
  const classes = fs.readFileSync(classesPath, 'utf-8').trim().split('\n');
  const expected = BANDS.map(b => b.label);
  if (classes.length !== expected.length || classes.some((c, i) => c !== expected[i])) {
    throw new ShapeMismatch(`class map in ${classesPath} does not match the band order`);
  }
  const model = await tf.loadLayersModel(fileLoadHandler(dir));
  const outputShape = model.outputs[0].shape;
  if (outputShape[outputShape.length - 1] !== N_CLASSES) {
    throw new ShapeMismatch(`checkpoint head has ${outputShape[outputShape.length - 1]} outputs, expected ${N_CLASSES}`);
  }
  return model;
}

// Filesystem save/load for tfjs models. The browser-oriented package has
// no file:// handlers, so this pair writes model.json (topology + weight
// specs) next to weights.bin and reads them back.

import * as fs from 'fs';
import * as path from 'path';
import * as tf from '@tensorflow/tfjs';
import { writeAtomic } from './csv';

function joinBuffers(weightData: ArrayBuffer | ArrayBuffer[]): ArrayBuffer {
  if (!Array.isArray(weightData)) return weightData;
  const total = weightData.reduce((n, part) => n + part.byteLength, 0);
  const joined = new Uint8Array(total);
  let offset = 0;
  for (const part of weightData) {
    joined.set(new Uint8Array(part), offset);
    offset += part.byteLength;
  }
  return joined.buffer;
}

export function fileSaveHandler(dir: string): tf.io.IOHandler {
  return {
    async save(artifacts: tf.io.ModelArtifacts) {
      fs.mkdirSync(dir, { recursive: true });
      const weightData = joinBuffers(artifacts.weightData as ArrayBuffer | ArrayBuffer[]);
      writeAtomic(
        path.join(dir, 'model.json'),
        JSON.stringify(
          { modelTopology: artifacts.modelTopology, weightSpecs: artifacts.weightSpecs },
          null,
          2,
        ),
      );
      writeAtomic(path.join(dir, 'weights.bin'), Buffer.from(weightData));
      return {
        modelArtifactsInfo: {
          dateSaved: new Date(),
          modelTopologyType: 'JSON' as const,
        },
      };
    },
  };
}

export function fileLoadHandler(dir: string): tf.io.IOHandler {
  return {
    async load(): Promise<tf.io.ModelArtifacts> {
      const meta = JSON.parse(fs.readFileSync(path.join(dir, 'model.json'), 'utf-8'));
      const weights = fs.readFileSync(path.join(dir, 'weights.bin'));
      return {
        modelTopology: meta.modelTopology,
        weightSpecs: meta.weightSpecs,
        weightData: weights.buffer.slice(weights.byteOffset, weights.byteOffset + weights.byteLength),
      };
    },
  };
}

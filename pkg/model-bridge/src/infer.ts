// Batched inference over a manifest, exporting the shared predictions
// CSV (estimator "ds13k", point = band midpoint) plus a probabilities
// sidecar.

import * as fs from 'fs';
import * as path from 'path';
import * as tf from '@tensorflow/tfjs';
import { argmaxYoungest, BANDS, N_CLASSES } from './bands';
import { parseManifest, renderPredictions, renderProbs, writeAtomic } from './csv';
import { loadImages, toTensors } from './data';
import { ShapeMismatch } from './errors';

export interface BandPrediction {
  subjectId: string;
  probabilities: number[];
  bandIndex: number;
  exportedPoint: number;
}

export async function inferManifest(
  model: tf.LayersModel,
  manifestPath: string,
  imageRoot: string,
  inputSize: number,
  batchSize: number,
): Promise<BandPrediction[]> {
  const rows = parseManifest(fs.readFileSync(manifestPath, 'utf-8'));
  const predictions: BandPrediction[] = [];
  for (let start = 0; start < rows.length; start += batchSize) {
    const batch = rows.slice(start, start + batchSize);
    const images = loadImages(batch, imageRoot, inputSize);
    const { x, y } = toTensors(batch, images, inputSize);
    y.dispose();
    const out = model.predict(x) as tf.Tensor;
    x.dispose();
    if (out.rank !== 2 || out.shape[1] !== N_CLASSES) {
      const shape = out.shape.join('x');
      out.dispose();
      throw new ShapeMismatch(`model returned ${shape}, expected ${batch.length}x${N_CLASSES}`);
    }
    const probs = (await out.array()) as number[][];
    out.dispose();
    for (let i = 0; i < batch.length; i++) {
      const bandIndex = argmaxYoungest(probs[i]);
      predictions.push({
        subjectId: batch[i].subjectId,
        probabilities: probs[i],
        bandIndex,
        exportedPoint: BANDS[bandIndex].midpoint,
      });
    }
  }
  return predictions;
}

export function writePredictionFiles(predictions: BandPrediction[], outDir: string): void {
  writeAtomic(
    path.join(outDir, 'predictions.csv'),
    renderPredictions(predictions.map(p => ({ subjectId: p.subjectId, point: p.exportedPoint }))),
  );
  writeAtomic(path.join(outDir, 'ds13k_probs.csv'), renderProbs(predictions));
}

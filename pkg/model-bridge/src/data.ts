// Dataset assembly: manifest rows to tensors, plus the seeded 80/20
// subject split. Pixel values are scaled to [0, 1].

import * as path from 'path';
import * as tf from '@tensorflow/tfjs';
import { BANDS, N_CLASSES } from './bands';
import { ManifestRow } from './csv';
import { EmptyClass } from './errors';
import { loadImage, resizeBilinear, RgbImage } from './image';
import { SplitMix64 } from './rng';

export interface Split {
  train: ManifestRow[];
  test: ManifestRow[];
}

// Deterministic partition by subject_id: sort, shuffle with the project
// PRNG, take the first 80% as train. Both sides stay non-empty whenever
// two or more subjects exist.
export function splitBySubject(rows: ManifestRow[], seed: number): Split {
  const ordered = [...rows].sort((a, b) => (a.subjectId < b.subjectId ? -1 : 1));
  new SplitMix64(seed).shuffle(ordered);
  let trainCount = Math.floor(ordered.length * 0.8);
  if (ordered.length >= 2) {
    trainCount = Math.min(Math.max(trainCount, 1), ordered.length - 1);
  }
  return { train: ordered.slice(0, trainCount), test: ordered.slice(trainCount) };
}

export function requireAllBands(rows: ManifestRow[]): void {
  const present = new Set(rows.map(r => r.bandIndex));
  for (let i = 0; i < N_CLASSES; i++) {
    if (!present.has(i)) throw new EmptyClass(BANDS[i].label);
  }
}

export function imagePath(imageRoot: string, row: ManifestRow): string {
  const ref = row.imageRef !== '' ? row.imageRef : `${row.subjectId}.png`;
  return path.join(imageRoot, ref);
}

export function loadImages(rows: ManifestRow[], imageRoot: string, inputSize: number): RgbImage[] {
  return rows.map(row =>
    resizeBilinear(loadImage(row.subjectId, imagePath(imageRoot, row)), inputSize, inputSize),
  );
}

export function toTensors(
  rows: ManifestRow[],
  images: RgbImage[],
  inputSize: number,
): { x: tf.Tensor4D; y: tf.Tensor2D } {
  const n = rows.length;
  const xData = new Float32Array(n * inputSize * inputSize * 3);
  const yData = new Float32Array(n * N_CLASSES);
  for (let i = 0; i < n; i++) {
    const pixels = images[i].data;
    const base = i * inputSize * inputSize * 3;
    for (let j = 0; j < pixels.length; j++) xData[base + j] = pixels[j] / 255;
    yData[i * N_CLASSES + rows[i].bandIndex] = 1;
  }
  return {
    x: tf.tensor4d(xData, [n, inputSize, inputSize, 3]),
    y: tf.tensor2d(yData, [n, N_CLASSES]),
  };
}

// Shared fixture helpers: synthetic PNGs and manifests. Band-coded
// images give each band a distinct base color plus seeded per-pixel
// noise, so a small model can separate bands while images within a band
// still differ.

import * as fs from 'fs';
import * as path from 'path';
import { PNG } from 'pngjs';
import { BANDS } from '../src/bands';
import { MANIFEST_HEADER } from '../src/csv';
import { SplitMix64 } from '../src/rng';

export const BAND_COLORS: [number, number, number][] = [
  [230, 40, 40],
  [40, 230, 40],
  [40, 40, 230],
  [230, 230, 40],
  [40, 230, 230],
];

export function writePng(
  filePath: string,
  width: number,
  height: number,
  pixel: (x: number, y: number) => [number, number, number],
): void {
  const png = new PNG({ width, height });
  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      const [r, g, b] = pixel(x, y);
      const i = (y * width + x) * 4;
      png.data[i] = r;
      png.data[i + 1] = g;
      png.data[i + 2] = b;
      png.data[i + 3] = 255;
    }
  }
  fs.writeFileSync(filePath, PNG.sync.write(png));
}

export function writeSolidPng(filePath: string, size: number, value: [number, number, number]): void {
  writePng(filePath, size, size, () => value);
}

export interface FixtureSubject {
  subjectId: string;
  age: number;
}

// perBand images per band, ages cycling through each band's range.
export function bandBalancedSubjects(perBand: number): FixtureSubject[] {
  const subjects: FixtureSubject[] = [];
  for (let b = 0; b < BANDS.length; b++) {
    for (let i = 0; i < perBand; i++) {
      const age = BANDS[b].low + (i % (BANDS[b].high - BANDS[b].low + 1));
      subjects.push({ subjectId: `b${b}-${String(i).padStart(2, '0')}`, age });
    }
  }
  return subjects;
}

export function renderManifest(subjects: FixtureSubject[]): string {
  const lines = [MANIFEST_HEADER];
  for (const s of subjects) {
    lines.push(`${s.subjectId},${s.age},unknown,synthetic,cc-by,${s.subjectId}.png`);
  }
  return lines.join('\n') + '\n';
}

// Writes manifest.csv plus one band-coded PNG per subject under root.
export function buildBandDataset(root: string, subjects: FixtureSubject[], size: number, noiseSeed = 5): string {
  fs.mkdirSync(root, { recursive: true });
  const manifestPath = path.join(root, 'manifest.csv');
  fs.writeFileSync(manifestPath, renderManifest(subjects));
  for (const s of subjects) {
    const band = bandOfAge(s.age);
    const noise = new SplitMix64(BigInt(noiseSeed) + BigInt(hashId(s.subjectId)));
    const [r, g, b] = BAND_COLORS[band];
    writePng(path.join(root, `${s.subjectId}.png`), size, size, () => [
      clampByte(r + noise.nextBelow(41) - 20),
      clampByte(g + noise.nextBelow(41) - 20),
      clampByte(b + noise.nextBelow(41) - 20),
    ]);
  }
  return manifestPath;
}

function bandOfAge(age: number): number {
  for (let i = 0; i < BANDS.length; i++) {
    if (age >= BANDS[i].low && age <= BANDS[i].high) return i;
  }
  throw new RangeError(`age ${age} outside fixture bands`);
}

function clampByte(v: number): number {
  return Math.min(255, Math.max(0, v));
}

function hashId(id: string): number {
  let h = 0;
  for (const ch of id) h = (h * 31 + ch.charCodeAt(0)) >>> 0;
  return h;
}

// Average-face computation per band: pixel-wise mean of the band's
// subjects, optionally split into two deterministic halves (sorted
// subject_id, alternating) with one mean image per half.

import * as fs from 'fs';
import { BANDS } from './bands';
import { ManifestRow, parseManifest } from './csv';
import { EmptyBand } from './errors';
import { averageImages, loadImage, RgbImage } from './image';
import { imagePath } from './data';

export interface AverageFace {
  label: string; // e.g. "[16-17]" or "[16-17] half 0"
  image: RgbImage;
}

export function bandIndexFromLabel(label: string): number {
  const index = BANDS.findIndex(b => b.label === label);
  if (index < 0) {
    const known = BANDS.map(b => b.label).join(', ');
    throw new RangeError(`unknown band ${JSON.stringify(label)}; expected one of ${known}`);
  }
  return index;
}

export function averageFaces(
  manifestPath: string,
  imageRoot: string,
  bandIndex: number,
  halves: boolean,
): AverageFace[] {
  const rows = parseManifest(fs.readFileSync(manifestPath, 'utf-8'));
  const band = BANDS[bandIndex];
  const members = rows
    .filter(r => r.bandIndex === bandIndex)
    .sort((a, b) => (a.subjectId < b.subjectId ? -1 : 1));
  if (members.length === 0) throw new EmptyBand(band.label);

  const load = (subset: ManifestRow[]) =>
    averageImages(subset.map(r => loadImage(r.subjectId, imagePath(imageRoot, r))));

  if (!halves) {
    return [{ label: band.label, image: load(members) }];
  }
  const first = members.filter((_, i) => i % 2 === 0);
  const second = members.filter((_, i) => i % 2 === 1);
  const faces: AverageFace[] = [{ label: `${band.label} half 0`, image: load(first) }];
  if (second.length > 0) {
    faces.push({ label: `${band.label} half 1`, image: load(second) });
  }
  return faces;
}

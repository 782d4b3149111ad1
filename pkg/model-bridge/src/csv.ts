// Manifest reader and predictions writer for the shared CSV contract.
// The manifest schema forbids commas, quotes and newlines inside fields,
// so rows split cleanly on commas; a quote anywhere means the file is not
// one of ours and is rejected rather than half-parsed.

import * as fs from 'fs';
import * as path from 'path';
import { SchemaError } from './errors';
import { bandIndexOf } from './bands';

export const MANIFEST_HEADER = 'subject_id,age,gender,source,license_tag,image_ref';
export const PREDICTIONS_HEADER = 'subject_id,estimator_id,point,low,high,latency_ms,raw_digest';

export interface ManifestRow {
  subjectId: string;
  age: number;
  bandIndex: number;
  imageRef: string;
}

export function parseManifest(text: string): ManifestRow[] {
  const lines = text.split(/\r?\n/);
  if ((lines[0] ?? '') !== MANIFEST_HEADER) {
    throw new SchemaError(1, `bad header ${JSON.stringify(lines[0] ?? '')}`);
  }
  const rows: ManifestRow[] = [];
  const seen = new Set<string>();
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i];
    if (line === '') continue;
    if (line.includes('"')) {
      throw new SchemaError(i + 1, 'quoted fields are not in the schema');
    }
    const fields = line.split(',');
    if (fields.length !== 6) {
      throw new SchemaError(i + 1, `expected 6 fields, got ${fields.length}`);
    }
    const [subjectId, ageText, , , , imageRef] = fields;
    if (subjectId === '') throw new SchemaError(i + 1, 'empty subject_id');
    if (seen.has(subjectId)) {
      throw new SchemaError(i + 1, `duplicate subject_id ${subjectId}`);
    }
    seen.add(subjectId);
    const age = Number(ageText);
    if (!Number.isInteger(age) || String(age) !== ageText) {
      throw new SchemaError(i + 1, `age must be an integer, got ${JSON.stringify(ageText)}`);
    }
    let bandIndex: number;
    try {
      bandIndex = bandIndexOf(age);
    } catch (e) {
      throw new SchemaError(i + 1, (e as Error).message);
    }
    rows.push({ subjectId, age, bandIndex, imageRef });
  }
  if (rows.length === 0) throw new SchemaError(1, 'manifest has no rows');
  return rows;
}

// Match the core's real formatting: at most 6 fractional digits, trailing
// zeros trimmed, no negative zero.
export function formatReal(value: number): string {
  let text = value.toFixed(6);
  if (text.includes('.')) {
    text = text.replace(/0+$/, '').replace(/\.$/, '');
  }
  return text === '-0' ? '0' : text;
}

export function renderPredictions(rows: { subjectId: string; point: number }[]): string {
  const lines = [PREDICTIONS_HEADER];
  for (const row of rows) {
    lines.push(`${row.subjectId},ds13k,${formatReal(row.point)},,,,`);
  }
  return lines.join('\n') + '\n';
}

export function renderProbs(rows: { subjectId: string; probabilities: number[] }[]): string {
  const lines = ['subject_id,p0,p1,p2,p3,p4'];
  for (const row of rows) {
    lines.push([row.subjectId, ...row.probabilities.map(formatReal)].join(','));
  }
  return lines.join('\n') + '\n';
}

// Write through a temp file in the same directory so a reader never sees
// a partial file.
export function writeAtomic(filePath: string, content: string | Buffer): void {
  const dir = path.dirname(filePath);
  fs.mkdirSync(dir, { recursive: true });
  const tmp = path.join(dir, `.${path.basename(filePath)}.tmp-${process.pid}`);
  fs.writeFileSync(tmp, content);
  fs.renameSync(tmp, filePath);
}

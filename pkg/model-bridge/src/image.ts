// PNG loading, bilinear resize, and average-face computation. Images are
// held as float RGB in [0, 255], HWC order, alpha dropped on decode.

import * as fs from 'fs';
import { PNG } from 'pngjs';
import { DimensionMismatch, MissingImage } from './errors';

export interface RgbImage {
  width: number;
  height: number;
  data: Float32Array; // length width * height * 3
}

export function decodePng(buffer: Buffer): RgbImage {
  const png = PNG.sync.read(buffer);
  const data = new Float32Array(png.width * png.height * 3);
  for (let i = 0; i < png.width * png.height; i++) {
    data[i * 3] = png.data[i * 4];
    data[i * 3 + 1] = png.data[i * 4 + 1];
    data[i * 3 + 2] = png.data[i * 4 + 2];
  }
  return { width: png.width, height: png.height, data };
}

export function loadImage(subjectId: string, path: string): RgbImage {
  let buffer: Buffer;
  try {
    buffer = fs.readFileSync(path);
  } catch {
    throw new MissingImage(subjectId, path);
  }
  return decodePng(buffer);
}

export function encodePng(image: RgbImage): Buffer {
  const png = new PNG({ width: image.width, height: image.height });
  for (let i = 0; i < image.width * image.height; i++) {
    for (let c = 0; c < 3; c++) {
      // Round-half-up quantization back to bytes.
      png.data[i * 4 + c] = Math.min(255, Math.max(0, Math.floor(image.data[i * 3 + c] + 0.5)));
    }
    png.data[i * 4 + 3] = 255;
  }
  return PNG.sync.write(png);
}

export function resizeBilinear(image: RgbImage, width: number, height: number): RgbImage {
  if (image.width === width && image.height === height) return image;
  const out = new Float32Array(width * height * 3);
  const scaleX = image.width / width;
  const scaleY = image.height / height;
  for (let y = 0; y < height; y++) {
    // Sample at pixel centers so the mapping is symmetric.
    const srcY = Math.min(Math.max((y + 0.5) * scaleY - 0.5, 0), image.height - 1);
    const y0 = Math.floor(srcY);
    const y1 = Math.min(y0 + 1, image.height - 1);
    const fy = srcY - y0;
    for (let x = 0; x < width; x++) {
      const srcX = Math.min(Math.max((x + 0.5) * scaleX - 0.5, 0), image.width - 1);
      const x0 = Math.floor(srcX);
      const x1 = Math.min(x0 + 1, image.width - 1);
      const fx = srcX - x0;
      for (let c = 0; c < 3; c++) {
        const p00 = image.data[(y0 * image.width + x0) * 3 + c];
        const p01 = image.data[(y0 * image.width + x1) * 3 + c];
        const p10 = image.data[(y1 * image.width + x0) * 3 + c];
        const p11 = image.data[(y1 * image.width + x1) * 3 + c];
        const top = p00 + (p01 - p00) * fx;
        const bottom = p10 + (p11 - p10) * fx;
        out[(y * width + x) * 3 + c] = top + (bottom - top) * fy;
      }
    }
  }
  return { width, height, data: out };
}

// Pixel-wise arithmetic mean. All inputs must share one size; the result
// stays float so black + white averages to exactly 127.5.
export function averageImages(images: RgbImage[]): RgbImage {
  if (images.length === 0) {
    throw new DimensionMismatch('at least one image', 'none');
  }
  const { width, height } = images[0];
  for (const image of images) {
    if (image.width !== width || image.height !== height) {
      throw new DimensionMismatch(`${width}x${height}`, `${image.width}x${image.height}`);
    }
  }
  // Accumulate in float64 so the only rounding is the final store.
  const sums = new Float64Array(width * height * 3);
  for (const image of images) {
    for (let i = 0; i < sums.length; i++) sums[i] += image.data[i];
  }
  const out = new Float32Array(sums.length);
  for (let i = 0; i < out.length; i++) out[i] = sums[i] / images.length;
  return { width, height, data: out };
}

// Frame painting helpers kept pure so tests can check the exact bytes.

import { Frame } from "./protocol.js";

/** Expand packed RGB rows into the RGBA bytes an ImageData wants. */
export function rgbToRgba(pixels: Uint8Array): Uint8ClampedArray {
  const count = pixels.length / 3;
  const out = new Uint8ClampedArray(count * 4);
  for (let i = 0; i < count; i++) {
    out[i * 4] = pixels[i * 3];
    out[i * 4 + 1] = pixels[i * 3 + 1];
    out[i * 4 + 2] = pixels[i * 3 + 2];
    out[i * 4 + 3] = 255;
  }
  return out;
}

/** One painted row back as packed RGB (alpha dropped). */
export function paintedRowRgb(rgba: Uint8ClampedArray, width: number, row: number): Uint8Array {
  const out = new Uint8Array(width * 3);
  for (let col = 0; col < width; col++) {
    const src = (row * width + col) * 4;
    out[col * 3] = rgba[src];
    out[col * 3 + 1] = rgba[src + 1];
    out[col * 3 + 2] = rgba[src + 2];
  }
  return out;
}

export function frameToRgba(frame: Frame): Uint8ClampedArray {
  return rgbToRgba(frame.pixels);
}

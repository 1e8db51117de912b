/** Page rasterization.
 *
 * Characters are drawn as filled boxes into an ink channel; two coordinate
 * ramp channels give the (translation-equivariant) convolution stack access
 * to absolute position, which column order depends on.
 */

import { F64 } from './tensor.js';
import { Page } from './pageio.js';

export const CHANNELS = 3;

export function rasterize(page: Page, resolution: number): F64 {
  const img = new Float64Array(resolution * resolution * CHANNELS);
  for (let y = 0; y < resolution; y++) {
    for (let x = 0; x < resolution; x++) {
      const base = (y * resolution + x) * CHANNELS;
      img[base + 1] = (x + 0.5) / resolution;
      img[base + 2] = (y + 0.5) / resolution;
    }
  }
  for (const c of page.chars) {
    const x0 = Math.max(0, Math.floor(c.x * resolution));
    const y0 = Math.max(0, Math.floor(c.y * resolution));
    const x1 = Math.min(resolution, Math.max(x0 + 1, Math.ceil((c.x + c.w) * resolution)));
    const y1 = Math.min(resolution, Math.max(y0 + 1, Math.ceil((c.y + c.h) * resolution)));
    for (let y = y0; y < y1; y++) {
      for (let x = x0; x < x1; x++) {
        img[(y * resolution + x) * CHANNELS] = 1;
      }
    }
  }
  return img;
}

export function centersOf(page: Page): Array<[number, number]> {
  return page.chars
    .slice()
    .sort((a, b) => a.id - b.id)
    .map((c) => [c.cx, c.cy] as [number, number]);
}

/** Encoder-decoder feature extractor over page rasters.
 *
 * Three resolution levels (full, /2, /4) with skip concatenation back to
 * the /2 map, where per-character feature vectors are gathered at each
 * character's center pixel and projected to the embedding width.  All
 * kernels use 'same' padding; layout is HWC with kernel [ky][kx][cin][cout].
 */

import { Rng } from './rng.js';
import { F64, Param, matVec, matVecGrad, param, randn, zeros } from './tensor.js';

export interface ExtractorConfig {
  resolution: number;   // input is resolution x resolution x 3
  c0: number;           // full-res channels
  c1: number;           // half-res channels
  c2: number;           // quarter-res channels
  cr: number;           // 1x1 reduction channels after skip concat
  c3: number;           // gathered feature channels
  embedDim: number;     // per-character embedding width
}

export const DESK_EXTRACTOR: ExtractorConfig = {
  resolution: 128, c0: 8, c1: 16, c2: 32, cr: 16, c3: 24, embedDim: 64,
};

export function conv3x3(x: F64, H: number, W: number, cin: number, K: F64,
                        b: F64, cout: number, stride: number, out: F64): void {
  const Ho = Math.ceil(H / stride);
  const Wo = Math.ceil(W / stride);
  for (let yo = 0; yo < Ho; yo++) {
    for (let xo = 0; xo < Wo; xo++) {
      const obase = (yo * Wo + xo) * cout;
      for (let co = 0; co < cout; co++) out[obase + co] = b[co];
    }
  }
  for (let yo = 0; yo < Ho; yo++) {
    for (let ky = 0; ky < 3; ky++) {
      const sy = stride * yo + ky - 1;
      if (sy < 0 || sy >= H) continue;
      for (let xo = 0; xo < Wo; xo++) {
        const obase = (yo * Wo + xo) * cout;
        for (let kx = 0; kx < 3; kx++) {
          const sx = stride * xo + kx - 1;
          if (sx < 0 || sx >= W) continue;
          const ibase = (sy * W + sx) * cin;
          const kbase = (ky * 3 + kx) * cin * cout;
          for (let ci = 0; ci < cin; ci++) {
            const xv = x[ibase + ci];
            if (xv === 0) continue;
            const kb = kbase + ci * cout;
            for (let co = 0; co < cout; co++) out[obase + co] += xv * K[kb + co];
          }
        }
      }
    }
  }
}

export function conv3x3Grad(x: F64, H: number, W: number, cin: number, K: F64,
                            cout: number, stride: number, dy: F64,
                            dK: F64, db: F64, dx: F64 | null): void {
  const Ho = Math.ceil(H / stride);
  const Wo = Math.ceil(W / stride);
  for (let yo = 0; yo < Ho; yo++) {
    for (let xo = 0; xo < Wo; xo++) {
      const obase = (yo * Wo + xo) * cout;
      for (let co = 0; co < cout; co++) db[co] += dy[obase + co];
    }
  }
  for (let yo = 0; yo < Ho; yo++) {
    for (let ky = 0; ky < 3; ky++) {
      const sy = stride * yo + ky - 1;
      if (sy < 0 || sy >= H) continue;
      for (let xo = 0; xo < Wo; xo++) {
        const obase = (yo * Wo + xo) * cout;
        for (let kx = 0; kx < 3; kx++) {
          const sx = stride * xo + kx - 1;
          if (sx < 0 || sx >= W) continue;
          const ibase = (sy * W + sx) * cin;
          const kbase = (ky * 3 + kx) * cin * cout;
          for (let ci = 0; ci < cin; ci++) {
            const xv = x[ibase + ci];
            const kb = kbase + ci * cout;
            let dxv = 0;
            for (let co = 0; co < cout; co++) {
              const g = dy[obase + co];
              dK[kb + co] += xv * g;
              dxv += K[kb + co] * g;
            }
            if (dx) dx[ibase + ci] += dxv;
          }
        }
      }
    }
  }
}

export function conv1x1(x: F64, pixels: number, cin: number, K: F64, b: F64,
                        cout: number, out: F64): void {
  for (let p = 0; p < pixels; p++) {
    const ibase = p * cin;
    const obase = p * cout;
    for (let co = 0; co < cout; co++) {
      let s = b[co];
      const kb = co * cin;
      for (let ci = 0; ci < cin; ci++) s += K[kb + ci] * x[ibase + ci];
      out[obase + co] = s;
    }
  }
}

export function conv1x1Grad(x: F64, pixels: number, cin: number, K: F64,
                            cout: number, dy: F64, dK: F64, db: F64,
                            dx: F64): void {
  for (let p = 0; p < pixels; p++) {
    const ibase = p * cin;
    const obase = p * cout;
    for (let co = 0; co < cout; co++) {
      const g = dy[obase + co];
      if (g === 0) continue;
      db[co] += g;
      const kb = co * cin;
      for (let ci = 0; ci < cin; ci++) {
        dK[kb + ci] += g * x[ibase + ci];
        dx[ibase + ci] += g * K[kb + ci];
      }
    }
  }
}

export function reluInPlace(a: F64): void {
  for (let i = 0; i < a.length; i++) if (a[i] < 0) a[i] = 0;
}

/** dz = da where the activation stayed positive. */
export function reluGradInPlace(a: F64, da: F64): void {
  for (let i = 0; i < a.length; i++) if (a[i] <= 0) da[i] = 0;
}

export function upsample2x(x: F64, H: number, W: number, c: number, out: F64): void {
  const Wo = 2 * W;
  for (let y = 0; y < 2 * H; y++) {
    const sy = y >> 1;
    for (let xo = 0; xo < Wo; xo++) {
      const sb = (sy * W + (xo >> 1)) * c;
      const ob = (y * Wo + xo) * c;
      for (let k = 0; k < c; k++) out[ob + k] = x[sb + k];
    }
  }
}

export function upsample2xGrad(H: number, W: number, c: number, dy: F64,
                               dx: F64): void {
  const Wo = 2 * W;
  for (let y = 0; y < 2 * H; y++) {
    const sy = y >> 1;
    for (let xo = 0; xo < Wo; xo++) {
      const sb = (sy * W + (xo >> 1)) * c;
      const ob = (y * Wo + xo) * c;
      for (let k = 0; k < c; k++) dx[sb + k] += dy[ob + k];
    }
  }
}

/** Activation buffers reused across images. */
interface Buffers {
  a0: F64; a1: F64; a2: F64; up: F64; cat: F64; red: F64; feat: F64;
  d_a0: F64; d_a1: F64; d_a2: F64; d_up: F64; d_cat: F64; d_red: F64; d_feat: F64;
}

export class Extractor {
  readonly cfg: ExtractorConfig;
  readonly params: Param[];
  private readonly k0: Param; private readonly b0: Param;
  private readonly k1: Param; private readonly b1: Param;
  private readonly k2: Param; private readonly b2: Param;
  private readonly kr: Param; private readonly br: Param;
  private readonly k4: Param; private readonly b4: Param;
  private readonly proj: Param; private readonly projB: Param;
  private readonly buf: Buffers;
  private img: F64 | null = null;
  private gatherIdx: Int32Array = new Int32Array(0);

  constructor(cfg: ExtractorConfig, rng: Rng) {
    if (cfg.resolution % 4 !== 0 || cfg.resolution <= 0) {
      throw new Error('resolution must be a positive multiple of 4');
    }
    this.cfg = cfg;
    const { c0, c1, c2, cr, c3, embedDim, resolution } = cfg;
    const he = (fanIn: number) => Math.sqrt(2 / fanIn);
    this.k0 = param('ext.k0', randn(9 * 3 * c0, he(9 * 3), rng));
    this.b0 = param('ext.b0', zeros(c0));
    this.k1 = param('ext.k1', randn(9 * c0 * c1, he(9 * c0), rng));
    this.b1 = param('ext.b1', zeros(c1));
    this.k2 = param('ext.k2', randn(9 * c1 * c2, he(9 * c1), rng));
    this.b2 = param('ext.b2', zeros(c2));
    this.kr = param('ext.kr', randn((c1 + c2) * cr, he(c1 + c2), rng));
    this.br = param('ext.br', zeros(cr));
    this.k4 = param('ext.k4', randn(9 * cr * c3, he(9 * cr), rng));
    this.b4 = param('ext.b4', zeros(c3));
    // small output scale keeps initial pointer logits near zero
    this.proj = param('ext.proj', randn(embedDim * c3, he(c3) / 2, rng));
    this.projB = param('ext.projB', zeros(embedDim));
    this.params = [this.k0, this.b0, this.k1, this.b1, this.k2, this.b2,
                   this.kr, this.br, this.k4, this.b4, this.proj, this.projB];

    const R = resolution, R2 = R / 2, R4 = R / 4;
    const alloc = (n: number) => new Float64Array(n);
    this.buf = {
      a0: alloc(R * R * c0), a1: alloc(R2 * R2 * c1), a2: alloc(R4 * R4 * c2),
      up: alloc(R2 * R2 * c2), cat: alloc(R2 * R2 * (c1 + c2)),
      red: alloc(R2 * R2 * cr), feat: alloc(R2 * R2 * c3),
      d_a0: alloc(R * R * c0), d_a1: alloc(R2 * R2 * c1), d_a2: alloc(R4 * R4 * c2),
      d_up: alloc(R2 * R2 * c2), d_cat: alloc(R2 * R2 * (c1 + c2)),
      d_red: alloc(R2 * R2 * cr), d_feat: alloc(R2 * R2 * c3),
    };
  }

  /** Per-character embeddings gathered at normalized centers.
   * Gathering is positionwise: permuting the centers permutes the output. */
  forward(img: F64, centers: Array<[number, number]>): F64 {
    const { resolution: R, c0, c1, c2, cr, c3, embedDim } = this.cfg;
    const R2 = R / 2, R4 = R / 4;
    const b = this.buf;
    this.img = img;

    conv3x3(img, R, R, 3, this.k0.value, this.b0.value, c0, 1, b.a0);
    reluInPlace(b.a0);
    conv3x3(b.a0, R, R, c0, this.k1.value, this.b1.value, c1, 2, b.a1);
    reluInPlace(b.a1);
    conv3x3(b.a1, R2, R2, c1, this.k2.value, this.b2.value, c2, 2, b.a2);
    reluInPlace(b.a2);
    upsample2x(b.a2, R4, R4, c2, b.up);
    for (let p = 0; p < R2 * R2; p++) {
      b.cat.set(b.up.subarray(p * c2, (p + 1) * c2), p * (c1 + c2));
      b.cat.set(b.a1.subarray(p * c1, (p + 1) * c1), p * (c1 + c2) + c2);
    }
    conv1x1(b.cat, R2 * R2, c1 + c2, this.kr.value, this.br.value, cr, b.red);
    reluInPlace(b.red);
    conv3x3(b.red, R2, R2, cr, this.k4.value, this.b4.value, c3, 1, b.feat);
    reluInPlace(b.feat);

    const n = centers.length;
    this.gatherIdx = new Int32Array(n);
    const H = new Float64Array(n * embedDim);
    const hRow = new Float64Array(embedDim);
    for (let i = 0; i < n; i++) {
      const [cx, cy] = centers[i];
      if (!(cx >= 0 && cx <= 1 && cy >= 0 && cy <= 1)) {
        throw new Error(`character center out of bounds: (${cx}, ${cy})`);
      }
      const px = Math.min(R2 - 1, Math.floor(cx * R2));
      const py = Math.min(R2 - 1, Math.floor(cy * R2));
      const pix = py * R2 + px;
      this.gatherIdx[i] = pix;
      matVec(this.proj.value, b.feat.subarray(pix * c3, (pix + 1) * c3),
             this.projB.value, embedDim, c3, hRow);
      H.set(hRow, i * embedDim);
    }
    return H;
  }

  /** Backprop dLoss/dH into all extractor parameters (adds to grads). */
  backward(dH: F64): void {
    const { resolution: R, c0, c1, c2, cr, c3, embedDim } = this.cfg;
    const R2 = R / 2, R4 = R / 4;
    const b = this.buf;
    if (!this.img) throw new Error('backward before forward');
    b.d_feat.fill(0);
    const n = this.gatherIdx.length;
    for (let i = 0; i < n; i++) {
      const pix = this.gatherIdx[i];
      matVecGrad(this.proj.value, b.feat.subarray(pix * c3, (pix + 1) * c3),
                 dH.subarray(i * embedDim, (i + 1) * embedDim),
                 embedDim, c3, this.proj.grad, this.projB.grad,
                 b.d_feat.subarray(pix * c3, (pix + 1) * c3));
    }
    reluGradInPlace(b.feat, b.d_feat);
    b.d_red.fill(0);
    conv3x3Grad(b.red, R2, R2, cr, this.k4.value, c3, 1, b.d_feat,
                this.k4.grad, this.b4.grad, b.d_red);
    reluGradInPlace(b.red, b.d_red);
    b.d_cat.fill(0);
    conv1x1Grad(b.cat, R2 * R2, c1 + c2, this.kr.value, cr, b.d_red,
                this.kr.grad, this.br.grad, b.d_cat);
    b.d_up.fill(0);
    b.d_a1.fill(0);
    for (let p = 0; p < R2 * R2; p++) {
      b.d_up.set(b.d_cat.subarray(p * (c1 + c2), p * (c1 + c2) + c2), p * c2);
      b.d_a1.set(b.d_cat.subarray(p * (c1 + c2) + c2, (p + 1) * (c1 + c2)), p * c1);
    }
    b.d_a2.fill(0);
    upsample2xGrad(R4, R4, c2, b.d_up, b.d_a2);
    reluGradInPlace(b.a2, b.d_a2);
    conv3x3Grad(b.a1, R2, R2, c1, this.k2.value, c2, 2, b.d_a2,
                this.k2.grad, this.b2.grad, b.d_a1);
    reluGradInPlace(b.a1, b.d_a1);
    b.d_a0.fill(0);
    conv3x3Grad(b.a0, R, R, c0, this.k1.value, c1, 2, b.d_a1,
                this.k1.grad, this.b1.grad, b.d_a0);
    reluGradInPlace(b.a0, b.d_a0);
    conv3x3Grad(this.img, R, R, 3, this.k0.value, c0, 1, b.d_a0,
                this.k0.grad, this.b0.grad, null);
  }
}

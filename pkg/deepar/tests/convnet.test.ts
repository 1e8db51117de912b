import { describe, expect, it } from 'vitest';

import {
  Extractor,
  conv3x3,
  conv3x3Grad,
  upsample2x,
  upsample2xGrad,
} from '../src/convnet.js';
import { Rng } from '../src/rng.js';
import { randn, zeroGrads } from '../src/tensor.js';
import { maxRelativeError, pageOf } from './helpers.js';
import { rasterize, centersOf } from '../src/raster.js';

const TINY = { resolution: 16, c0: 4, c1: 6, c2: 8, cr: 5, c3: 6, embedDim: 8 };

describe('conv ops', () => {
  it('conv3x3 gradient matches central differences (stride 1 and 2)', () => {
    const rng = new Rng(21);
    for (const stride of [1, 2]) {
      const H = 6, W = 6, cin = 3, cout = 4;
      const Ho = Math.ceil(H / stride), Wo = Math.ceil(W / stride);
      const x = randn(H * W * cin, 1, rng);
      const K = randn(9 * cin * cout, 0.5, rng);
      const b = randn(cout, 0.1, rng);
      const dy = randn(Ho * Wo * cout, 1, rng);
      const out = new Float64Array(Ho * Wo * cout);

      const loss = () => {
        conv3x3(x, H, W, cin, K, b, cout, stride, out);
        let s = 0;
        for (let i = 0; i < out.length; i++) s += out[i] * dy[i];
        return s;
      };
      loss();
      const dK = new Float64Array(K.length);
      const db = new Float64Array(b.length);
      const dx = new Float64Array(x.length);
      conv3x3Grad(x, H, W, cin, K, cout, stride, dy, dK, db, dx);

      const eps = 1e-6;
      const analytic: number[] = [];
      const numeric: number[] = [];
      const probe = (buf: Float64Array, grad: Float64Array, step: number) => {
        for (let i = 0; i < buf.length; i += step) {
          const orig = buf[i];
          buf[i] = orig + eps;
          const up = loss();
          buf[i] = orig - eps;
          const down = loss();
          buf[i] = orig;
          analytic.push(grad[i]);
          numeric.push((up - down) / (2 * eps));
        }
      };
      probe(K, dK, 7);
      probe(b, db, 1);
      probe(x, dx, 11);
      expect(maxRelativeError(analytic, numeric)).toBeLessThan(1e-6);
    }
  });

  it('upsample2x gradient is exact pooling of child gradients', () => {
    const rng = new Rng(23);
    const H = 3, W = 3, c = 2;
    const x = randn(H * W * c, 1, rng);
    const up = new Float64Array(4 * H * W * c);
    upsample2x(x, H, W, c, up);
    expect(up[0]).toBe(x[0]);
    const dy = randn(up.length, 1, rng);
    const dx = new Float64Array(x.length);
    upsample2xGrad(H, W, c, dy, dx);
    // each source pixel collects its four children
    let expected = 0;
    for (const [yy, xx] of [[0, 0], [0, 1], [1, 0], [1, 1]]) {
      expected += dy[(yy * 2 * W + xx) * c];
    }
    expect(Math.abs(dx[0] - expected)).toBeLessThan(1e-12);
  });
});

describe('extractor', () => {
  const page = pageOf([
    [0.8, 0.2, 0.1, 0.1],
    [0.8, 0.5, 0.1, 0.1],
    [0.3, 0.35, 0.1, 0.1],
  ]);

  it('emits one embedding per character, permuting with the input', () => {
    const ext = new Extractor(TINY, new Rng(31));
    const img = rasterize(page, TINY.resolution);
    const centers = centersOf(page);
    const H = ext.forward(img, centers);
    expect(H.length).toBe(3 * TINY.embedDim);
    const permuted = [centers[2], centers[0], centers[1]];
    const Hp = ext.forward(img, permuted);
    for (let k = 0; k < TINY.embedDim; k++) {
      expect(Hp[0 * TINY.embedDim + k]).toBe(H[2 * TINY.embedDim + k]);
      expect(Hp[1 * TINY.embedDim + k]).toBe(H[0 * TINY.embedDim + k]);
    }
  });

  it('gives identical vectors to characters sharing a center', () => {
    const ext = new Extractor(TINY, new Rng(33));
    const img = rasterize(page, TINY.resolution);
    const c = centersOf(page);
    const H = ext.forward(img, [c[0], c[0]]);
    for (let k = 0; k < TINY.embedDim; k++) {
      expect(H[k]).toBe(H[TINY.embedDim + k]);
    }
  });

  it('rejects out-of-bounds centers', () => {
    const ext = new Extractor(TINY, new Rng(35));
    const img = rasterize(page, TINY.resolution);
    expect(() => ext.forward(img, [[1.5, 0.5]])).toThrow(/out of bounds/);
  });

  it('end-to-end gradient matches central differences', () => {
    const ext = new Extractor(TINY, new Rng(37));
    const img = rasterize(page, TINY.resolution);
    const centers = centersOf(page);
    const rng = new Rng(39);
    const dH = randn(centers.length * TINY.embedDim, 1, rng);

    const loss = () => {
      const H = ext.forward(img, centers);
      let s = 0;
      for (let i = 0; i < H.length; i++) s += H[i] * dH[i];
      return s;
    };
    loss();
    zeroGrads(ext.params);
    ext.backward(dH);

    const eps = 1e-6;
    const analytic: number[] = [];
    const numeric: number[] = [];
    for (const p of ext.params) {
      for (let i = 0; i < p.value.length; i += Math.max(1, Math.floor(p.value.length / 5))) {
        const orig = p.value[i];
        p.value[i] = orig + eps;
        const up = loss();
        p.value[i] = orig - eps;
        const down = loss();
        p.value[i] = orig;
        analytic.push(p.grad[i]);
        numeric.push((up - down) / (2 * eps));
      }
    }
    expect(maxRelativeError(analytic, numeric)).toBeLessThan(1e-5);
  });
});

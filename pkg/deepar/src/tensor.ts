/** Flat float64 parameter/activation helpers.
 *
 * Everything in this package runs on plain Float64Array buffers with
 * explicit shapes; double precision keeps gradient checks and the decoder's
 * distribution invariants exact.
 */

import { Rng } from './rng.js';

export type F64 = Float64Array;

export function zeros(n: number): F64 {
  return new Float64Array(n);
}

export function randn(n: number, std: number, rng: Rng): F64 {
  const out = new Float64Array(n);
  for (let i = 0; i < n; i++) out[i] = rng.normal() * std;
  return out;
}

/** A learnable buffer with its gradient and momentum accumulators. */
export interface Param {
  name: string;
  value: F64;
  grad: F64;
  velocity: F64;
}

export function param(name: string, value: F64): Param {
  return {
    name,
    value,
    grad: new Float64Array(value.length),
    velocity: new Float64Array(value.length),
  };
}

export function zeroGrads(params: Param[]): void {
  for (const p of params) p.grad.fill(0);
}

/** SGD with momentum: v = mu*v - lr*g; w += v. Gradients are averaged by
 * `scale` (1/batch) and clipped to a global norm before the step. */
export function sgdStep(params: Param[], lr: number, momentum: number,
                        scale: number, clipNorm = 5.0): void {
  let sq = 0;
  for (const p of params) {
    for (let i = 0; i < p.grad.length; i++) {
      const g = p.grad[i] * scale;
      sq += g * g;
    }
  }
  const norm = Math.sqrt(sq);
  const clip = norm > clipNorm ? clipNorm / norm : 1;
  for (const p of params) {
    const { value, grad, velocity } = p;
    for (let i = 0; i < value.length; i++) {
      const v = momentum * velocity[i] - lr * grad[i] * scale * clip;
      velocity[i] = v;
      value[i] += v;
    }
  }
}

export function dot(a: F64, b: F64, offA: number, offB: number, n: number): number {
  let s = 0;
  for (let i = 0; i < n; i++) s += a[offA + i] * b[offB + i];
  return s;
}

/** y = W x + b with W row-major [rows x cols]. */
export function matVec(W: F64, x: F64, b: F64 | null, rows: number,
                       cols: number, y: F64): void {
  for (let r = 0; r < rows; r++) {
    let s = b ? b[r] : 0;
    const base = r * cols;
    for (let c = 0; c < cols; c++) s += W[base + c] * x[c];
    y[r] = s;
  }
}

/** Backward of matVec: accumulates dW, db, dx (dx may be null). */
export function matVecGrad(W: F64, x: F64, dy: F64, rows: number, cols: number,
                           dW: F64, db: F64 | null, dx: F64 | null): void {
  for (let r = 0; r < rows; r++) {
    const g = dy[r];
    if (g === 0) continue;
    const base = r * cols;
    if (db) db[r] += g;
    for (let c = 0; c < cols; c++) {
      dW[base + c] += g * x[c];
      if (dx) dx[c] += g * W[base + c];
    }
  }
}

export function softmaxInPlace(logits: F64): void {
  let max = -Infinity;
  for (let i = 0; i < logits.length; i++) if (logits[i] > max) max = logits[i];
  let sum = 0;
  for (let i = 0; i < logits.length; i++) {
    logits[i] = Math.exp(logits[i] - max);
    sum += logits[i];
  }
  for (let i = 0; i < logits.length; i++) logits[i] /= sum;
}

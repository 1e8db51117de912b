/** Recurrent pointer decoder.
 *
 * One step: attend over all position embeddings with the current state,
 * feed [previous character's embedding, attention readout] through a GRU,
 * project the new state, and score every candidate position (plus a
 * learned end token) by dot product; the next position's distribution is
 * the softmax of those scores.  Training runs teacher-forced and unmasked;
 * decoding masks already-predicted positions to exactly zero probability.
 *
 * Everything is float64 with hand-derived gradients, so finite-difference
 * checks hold tightly and distribution invariants are exact.
 */

import { Rng } from './rng.js';
import { F64, Param, matVec, matVecGrad, param, randn, softmaxInPlace, zeros } from './tensor.js';

export interface DecoderConfig {
  dim: number;    // embedding and state width
  heads: number;  // attention heads (dim % heads == 0)
}

export const DESK_DECODER: DecoderConfig = { dim: 64, heads: 4 };

export class AllMaskedError extends Error {}

export interface KV {
  K: F64;  // n x dim
  V: F64;  // n x dim
  n: number;
}

export interface DecoderState {
  s: F64;
  mask: boolean[];  // true = position already predicted
}

interface StepCache {
  sPrev: F64;
  hPrev: F64;
  q: F64;
  alphas: F64[];   // per head, length n
  attn: F64;
  A: F64;
  x: F64;          // [hPrev; A]
  z: F64; r: F64; c: F64;
  s: F64;
  o: F64;
  probs: F64;      // length n+1 (positions then end), zeros where masked
  candidates: number[];
  prevIndex: number; // position fed as hPrev (-1 = learned start input)
}

export class Decoder {
  readonly cfg: DecoderConfig;
  readonly params: Param[];
  private readonly Wq: Param; private readonly Wk: Param;
  private readonly Wv: Param; private readonly Wm: Param;
  private readonly Wz: Param; private readonly Uz: Param; private readonly bz: Param;
  private readonly Wr: Param; private readonly Ur: Param; private readonly br: Param;
  private readonly Wc: Param; private readonly Uc: Param; private readonly bc: Param;
  private readonly Wo: Param;
  private readonly s0: Param; private readonly xStart: Param;
  private readonly eEnd: Param;

  constructor(cfg: DecoderConfig, rng: Rng) {
    if (cfg.dim % cfg.heads !== 0) throw new Error('dim must divide into heads');
    this.cfg = cfg;
    const D = cfg.dim;
    const xavier = 1 / Math.sqrt(D);
    this.Wq = param('dec.Wq', randn(D * D, xavier, rng));
    this.Wk = param('dec.Wk', randn(D * D, xavier, rng));
    this.Wv = param('dec.Wv', randn(D * D, xavier, rng));
    this.Wm = param('dec.Wm', randn(D * D, xavier, rng));
    const gateIn = 1 / Math.sqrt(2 * D);
    this.Wz = param('dec.Wz', randn(D * 2 * D, gateIn, rng));
    this.Uz = param('dec.Uz', randn(D * D, xavier, rng));
    this.bz = param('dec.bz', zeros(D));
    this.Wr = param('dec.Wr', randn(D * 2 * D, gateIn, rng));
    this.Ur = param('dec.Ur', randn(D * D, xavier, rng));
    this.br = param('dec.br', zeros(D));
    this.Wc = param('dec.Wc', randn(D * 2 * D, gateIn, rng));
    this.Uc = param('dec.Uc', randn(D * D, xavier, rng));
    this.bc = param('dec.bc', zeros(D));
    // small output scale keeps initial pointer logits near zero
    this.Wo = param('dec.Wo', randn(D * D, 0.04, rng));
    this.s0 = param('dec.s0', zeros(D));
    this.xStart = param('dec.xStart', randn(D, 0.3, rng));
    this.eEnd = param('dec.eEnd', randn(D, 0.02, rng));
    this.params = [this.Wq, this.Wk, this.Wv, this.Wm,
                   this.Wz, this.Uz, this.bz, this.Wr, this.Ur, this.br,
                   this.Wc, this.Uc, this.bc, this.Wo,
                   this.s0, this.xStart, this.eEnd];
  }

  get startState(): F64 {
    return this.s0.value;
  }

  precomputeKV(H: F64, n: number): KV {
    const D = this.cfg.dim;
    const K = new Float64Array(n * D);
    const V = new Float64Array(n * D);
    for (let j = 0; j < n; j++) {
      matVec(this.Wk.value, H.subarray(j * D, (j + 1) * D), null, D, D,
             K.subarray(j * D, (j + 1) * D) as F64);
      matVec(this.Wv.value, H.subarray(j * D, (j + 1) * D), null, D, D,
             V.subarray(j * D, (j + 1) * D) as F64);
    }
    return { K, V, n };
  }

  /** One decode step.  `candidates` are the unmasked positions; the end
   * token is always scored.  Returns softmax probabilities over n+1 slots
   * (position 0..n-1, then end) with masked slots exactly 0. */
  private stepCore(sPrev: F64, hPrev: F64, H: F64, kv: KV,
                   candidates: number[], prevIndex: number,
                   allowEnd = true): StepCache {
    const { dim: D, heads: NH } = this.cfg;
    const dh = D / NH;
    const scale = 1 / Math.sqrt(dh);
    const n = kv.n;

    const q = new Float64Array(D);
    matVec(this.Wq.value, sPrev, null, D, D, q);

    const alphas: F64[] = [];
    const attn = new Float64Array(D);
    for (let a = 0; a < NH; a++) {
      const off = a * dh;
      const scores = new Float64Array(n);
      for (let j = 0; j < n; j++) {
        let s = 0;
        for (let k = 0; k < dh; k++) s += q[off + k] * kv.K[j * D + off + k];
        scores[j] = s * scale;
      }
      softmaxInPlace(scores);
      alphas.push(scores);
      for (let j = 0; j < n; j++) {
        const w = scores[j];
        for (let k = 0; k < dh; k++) attn[off + k] += w * kv.V[j * D + off + k];
      }
    }
    const A = new Float64Array(D);
    matVec(this.Wm.value, attn, null, D, D, A);

    const x = new Float64Array(2 * D);
    x.set(hPrev, 0);
    x.set(A, D);

    const z = new Float64Array(D);
    const r = new Float64Array(D);
    const c = new Float64Array(D);
    const tmp = new Float64Array(D);
    matVec(this.Wz.value, x, this.bz.value, D, 2 * D, z);
    matVec(this.Uz.value, sPrev, null, D, D, tmp);
    for (let i = 0; i < D; i++) z[i] = 1 / (1 + Math.exp(-(z[i] + tmp[i])));
    matVec(this.Wr.value, x, this.br.value, D, 2 * D, r);
    matVec(this.Ur.value, sPrev, null, D, D, tmp);
    for (let i = 0; i < D; i++) r[i] = 1 / (1 + Math.exp(-(r[i] + tmp[i])));
    const rs = new Float64Array(D);
    for (let i = 0; i < D; i++) rs[i] = r[i] * sPrev[i];
    matVec(this.Wc.value, x, this.bc.value, D, 2 * D, c);
    matVec(this.Uc.value, rs, null, D, D, tmp);
    for (let i = 0; i < D; i++) c[i] = Math.tanh(c[i] + tmp[i]);
    const s = new Float64Array(D);
    for (let i = 0; i < D; i++) s[i] = (1 - z[i]) * sPrev[i] + z[i] * c[i];

    const o = new Float64Array(D);
    matVec(this.Wo.value, s, null, D, D, o);

    const logits = new Float64Array(candidates.length + (allowEnd ? 1 : 0));
    for (let ci = 0; ci < candidates.length; ci++) {
      const j = candidates[ci];
      let dotp = 0;
      for (let k = 0; k < D; k++) dotp += o[k] * H[j * D + k];
      logits[ci] = dotp;
    }
    if (allowEnd) {
      let endDot = 0;
      for (let k = 0; k < D; k++) endDot += o[k] * this.eEnd.value[k];
      logits[candidates.length] = endDot;
    }
    softmaxInPlace(logits);

    const probs = new Float64Array(n + 1);
    for (let ci = 0; ci < candidates.length; ci++) probs[candidates[ci]] = logits[ci];
    if (allowEnd) probs[n] = logits[candidates.length];

    return { sPrev, hPrev, q, alphas, attn, A, x, z, r, c, s, o, probs,
             candidates, prevIndex };
  }

  /** Public single-step interface used by greedy decoding and tests.
   * With `allowEnd` false (no end token scored), a fully masked page has
   * nothing to point at and raises AllMaskedError. */
  decodeStep(state: DecoderState, prevEmbedding: F64 | null, H: F64,
             kv: KV, allowEnd = true): { state: DecoderState; probs: F64 } {
    const n = kv.n;
    const candidates: number[] = [];
    for (let j = 0; j < n; j++) if (!state.mask[j]) candidates.push(j);
    if (candidates.length === 0 && !allowEnd) {
      throw new AllMaskedError('every position is masked and no end token');
    }
    const hPrev = prevEmbedding ?? this.xStart.value;
    const cache = this.stepCore(state.s, hPrev, H, kv, candidates, -2, allowEnd);
    return { state: { s: cache.s, mask: state.mask.slice() }, probs: cache.probs };
  }

  /** Teacher-forced mean NLL over the n+1 steps (n positions plus end). */
  forwardLoss(H: F64, n: number, truth: number[]): { loss: number; caches: StepCache[] } {
    const D = this.cfg.dim;
    const kv = this.precomputeKV(H, n);
    const all = Array.from({ length: n }, (_, j) => j);
    const caches: StepCache[] = [];
    let s = this.s0.value;
    let loss = 0;
    for (let t = 0; t <= n; t++) {
      const prevIndex = t === 0 ? -1 : truth[t - 1];
      const hPrev = prevIndex < 0 ? this.xStart.value
        : H.subarray(prevIndex * D, (prevIndex + 1) * D) as F64;
      const cache = this.stepCore(s, hPrev, H, kv, all, prevIndex);
      const target = t < n ? truth[t] : n;
      loss += -Math.log(cache.probs[target]);
      caches.push(cache);
      s = cache.s;
    }
    return { loss: loss / (n + 1), caches };
  }

  /** Backprop the teacher-forced loss; accumulates parameter grads and,
   * when `dH` is given, the gradient w.r.t. the embeddings. */
  backward(H: F64, n: number, truth: number[], caches: StepCache[],
           dH: F64 | null): void {
    const { dim: D, heads: NH } = this.cfg;
    const dh = D / NH;
    const scale = 1 / Math.sqrt(dh);
    const T = n + 1;
    const dKacc = new Float64Array(n * D);
    const dVacc = new Float64Array(n * D);
    const kv = this.precomputeKV(H, n);

    let dsNext = new Float64Array(D);
    for (let t = T - 1; t >= 0; t--) {
      const cache = caches[t];
      const target = t < n ? truth[t] : n;

      // softmax + NLL: dlogit = (p - onehot) / T over candidate slots
      const dlogits = new Float64Array(n + 1);
      for (let j = 0; j <= n; j++) dlogits[j] = cache.probs[j] / T;
      dlogits[target] -= 1 / T;

      const dO = new Float64Array(D);
      for (const j of cache.candidates) {
        const g = dlogits[j];
        if (g === 0) continue;
        for (let k = 0; k < D; k++) {
          dO[k] += g * H[j * D + k];
          if (dH) dH[j * D + k] += g * cache.o[k];
        }
      }
      const gEnd = dlogits[n];
      for (let k = 0; k < D; k++) {
        dO[k] += gEnd * this.eEnd.value[k];
        this.eEnd.grad[k] += gEnd * cache.o[k];
      }

      // o = Wo s
      const ds = new Float64Array(D);
      matVecGrad(this.Wo.value, cache.s, dO, D, D, this.Wo.grad, null, ds);
      for (let i = 0; i < D; i++) ds[i] += dsNext[i];

      // s = (1-z) sPrev + z c
      const dz = new Float64Array(D);
      const dc = new Float64Array(D);
      const dsPrev = new Float64Array(D);
      for (let i = 0; i < D; i++) {
        dz[i] = ds[i] * (cache.c[i] - cache.sPrev[i]);
        dc[i] = ds[i] * cache.z[i];
        dsPrev[i] = ds[i] * (1 - cache.z[i]);
      }
      // c = tanh(Wc x + Uc (r . sPrev) + bc)
      const dcPre = new Float64Array(D);
      for (let i = 0; i < D; i++) dcPre[i] = dc[i] * (1 - cache.c[i] * cache.c[i]);
      const dx = new Float64Array(2 * D);
      matVecGrad(this.Wc.value, cache.x, dcPre, D, 2 * D, this.Wc.grad,
                 this.bc.grad, dx);
      const rs = new Float64Array(D);
      for (let i = 0; i < D; i++) rs[i] = cache.r[i] * cache.sPrev[i];
      const dRs = new Float64Array(D);
      matVecGrad(this.Uc.value, rs, dcPre, D, D, this.Uc.grad, null, dRs);
      const dr = new Float64Array(D);
      for (let i = 0; i < D; i++) {
        dr[i] = dRs[i] * cache.sPrev[i];
        dsPrev[i] += dRs[i] * cache.r[i];
      }
      // gates
      const dzPre = new Float64Array(D);
      const drPre = new Float64Array(D);
      for (let i = 0; i < D; i++) {
        dzPre[i] = dz[i] * cache.z[i] * (1 - cache.z[i]);
        drPre[i] = dr[i] * cache.r[i] * (1 - cache.r[i]);
      }
      matVecGrad(this.Wz.value, cache.x, dzPre, D, 2 * D, this.Wz.grad,
                 this.bz.grad, dx);
      matVecGrad(this.Uz.value, cache.sPrev, dzPre, D, D, this.Uz.grad, null,
                 dsPrev);
      matVecGrad(this.Wr.value, cache.x, drPre, D, 2 * D, this.Wr.grad,
                 this.br.grad, dx);
      matVecGrad(this.Ur.value, cache.sPrev, drPre, D, D, this.Ur.grad, null,
                 dsPrev);

      // x = [hPrev; A]
      const dhPrev = dx.subarray(0, D);
      const dA = dx.subarray(D, 2 * D) as F64;
      if (cache.prevIndex === -1) {
        for (let i = 0; i < D; i++) this.xStart.grad[i] += dhPrev[i];
      } else if (dH && cache.prevIndex >= 0) {
        const base = cache.prevIndex * D;
        for (let i = 0; i < D; i++) dH[base + i] += dhPrev[i];
      }

      // A = Wm attn
      const dAttn = new Float64Array(D);
      matVecGrad(this.Wm.value, cache.attn, dA, D, D, this.Wm.grad, null, dAttn);

      // attention heads
      const dq = new Float64Array(D);
      for (let a = 0; a < NH; a++) {
        const off = a * dh;
        const alpha = cache.alphas[a];
        const dAlpha = new Float64Array(n);
        for (let j = 0; j < n; j++) {
          let g = 0;
          for (let k = 0; k < dh; k++) {
            g += dAttn[off + k] * kv.V[j * D + off + k];
            dVacc[j * D + off + k] += alpha[j] * dAttn[off + k];
          }
          dAlpha[j] = g;
        }
        let inner = 0;
        for (let j = 0; j < n; j++) inner += alpha[j] * dAlpha[j];
        for (let j = 0; j < n; j++) {
          const dScore = alpha[j] * (dAlpha[j] - inner);
          if (dScore === 0) continue;
          for (let k = 0; k < dh; k++) {
            dq[off + k] += dScore * kv.K[j * D + off + k] * scale;
            dKacc[j * D + off + k] += dScore * cache.q[off + k] * scale;
          }
        }
      }
      // q = Wq sPrev
      matVecGrad(this.Wq.value, cache.sPrev, dq, D, D, this.Wq.grad, null, dsPrev);

      dsNext = dsPrev;
    }
    // initial state
    for (let i = 0; i < D; i++) this.s0.grad[i] += dsNext[i];

    // K = Wk H, V = Wv H (shared across steps)
    for (let j = 0; j < n; j++) {
      matVecGrad(this.Wk.value, H.subarray(j * D, (j + 1) * D) as F64,
                 dKacc.subarray(j * D, (j + 1) * D) as F64, D, D,
                 this.Wk.grad, null,
                 dH ? dH.subarray(j * D, (j + 1) * D) as F64 : null);
      matVecGrad(this.Wv.value, H.subarray(j * D, (j + 1) * D) as F64,
                 dVacc.subarray(j * D, (j + 1) * D) as F64, D, D,
                 this.Wv.grad, null,
                 dH ? dH.subarray(j * D, (j + 1) * D) as F64 : null);
    }
  }

  /** Greedy masked decoding: argmax each step, stop at the end token or
   * when every position is used.  Output positions never repeat. */
  decodeGreedy(H: F64, n: number): number[] {
    const D = this.cfg.dim;
    const kv = this.precomputeKV(H, n);
    let state: DecoderState = { s: this.s0.value, mask: new Array(n).fill(false) };
    const out: number[] = [];
    let prev: F64 | null = null;
    for (let t = 0; t < n; t++) {
      const { state: next, probs } = this.decodeStep(state, prev, H, kv);
      let best = n;  // end token
      let bestP = probs[n];
      for (let j = 0; j < n; j++) {
        if (!state.mask[j] && probs[j] > bestP) {
          best = j;
          bestP = probs[j];
        }
      }
      if (best === n) break;
      out.push(best);
      next.mask[best] = true;
      state = next;
      prev = H.subarray(best * D, (best + 1) * D) as F64;
    }
    return out;
  }
}

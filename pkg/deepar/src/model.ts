/** Full ordering model: raster -> character embeddings -> pointer decode.
 * Checkpoints are self-describing JSON with the config embedded.
 */

import * as fs from 'node:fs';

import { DESK_EXTRACTOR, Extractor, ExtractorConfig } from './convnet.js';
import { DESK_DECODER, Decoder, DecoderConfig } from './decoder.js';
import { Page } from './pageio.js';
import { centersOf, rasterize } from './raster.js';
import { reinsertSkipped } from './reinsert.js';
import { Rng } from './rng.js';
import { F64, Param } from './tensor.js';

export interface ModelConfig {
  extractor: ExtractorConfig;
  decoder: DecoderConfig;
}

export const DESK_MODEL: ModelConfig = {
  extractor: DESK_EXTRACTOR,
  decoder: DESK_DECODER,
};

export class MissingGroundTruthError extends Error {}

export class DeepArModel {
  readonly cfg: ModelConfig;
  readonly extractor: Extractor;
  readonly decoder: Decoder;
  readonly params: Param[];

  constructor(cfg: ModelConfig, seed: number) {
    if (cfg.extractor.embedDim !== cfg.decoder.dim) {
      throw new Error('embedding width must match decoder width');
    }
    this.cfg = cfg;
    const rng = new Rng(seed);
    this.extractor = new Extractor(cfg.extractor, rng);
    this.decoder = new Decoder(cfg.decoder, rng);
    this.params = [...this.extractor.params, ...this.decoder.params];
  }

  /** Per-character embeddings for a page (order follows char ids). */
  embeddings(page: Page): F64 {
    const img = rasterize(page, this.cfg.extractor.resolution);
    return this.extractor.forward(img, centersOf(page));
  }

  /** Teacher-forced mean NLL; accumulates gradients when train=true. */
  pageLoss(page: Page, train: boolean): number {
    if (!page.truth) {
      throw new MissingGroundTruthError(`page ${page.pageId} has no reading order`);
    }
    const n = page.chars.length;
    if (n === 0) return 0;
    const H = this.embeddings(page);
    const { loss, caches } = this.decoder.forwardLoss(H, n, page.truth);
    if (train) {
      const dH = new Float64Array(H.length);
      this.decoder.backward(H, n, page.truth, caches, dH);
      this.extractor.backward(dH);
    }
    return loss;
  }

  /** Teacher-forced next-position top-1 accuracy (diagnostic). */
  teacherForcedAccuracy(page: Page): number {
    if (!page.truth) throw new MissingGroundTruthError(page.pageId);
    const n = page.chars.length;
    if (n === 0) return 1;
    const H = this.embeddings(page);
    const { caches } = this.decoder.forwardLoss(H, n, page.truth);
    let hits = 0;
    for (let t = 0; t <= n; t++) {
      const probs = caches[t].probs;
      let best = 0;
      for (let j = 1; j <= n; j++) if (probs[j] > probs[best]) best = j;
      const target = t < n ? page.truth[t] : n;
      if (best === target) hits++;
    }
    return hits / (n + 1);
  }

  /** Greedy decode plus nearest-neighbor re-insertion: a full permutation. */
  predict(page: Page): number[] {
    const n = page.chars.length;
    if (n === 0) return [];
    const H = this.embeddings(page);
    const partial = this.decoder.decodeGreedy(H, n);
    return reinsertSkipped(partial, page);
  }

  save(file: string): void {
    const params: Record<string, number[]> = {};
    for (const p of this.params) params[p.name] = Array.from(p.value);
    fs.writeFileSync(file, JSON.stringify({
      format: 'deepar-checkpoint',
      version: 1,
      config: this.cfg,
      params,
    }), 'utf-8');
  }

  static load(file: string): DeepArModel {
    const data = JSON.parse(fs.readFileSync(file, 'utf-8'));
    if (data.format !== 'deepar-checkpoint') {
      throw new Error(`${file} is not a checkpoint`);
    }
    const model = new DeepArModel(data.config as ModelConfig, 0);
    for (const p of model.params) {
      const stored = data.params[p.name];
      if (!stored || stored.length !== p.value.length) {
        throw new Error(`checkpoint parameter mismatch for ${p.name}`);
      }
      p.value.set(stored);
    }
    return model;
  }
}

/** Teacher-forced training with SGD + momentum. */

import { DeepArModel } from './model.js';
import { Page } from './pageio.js';
import { Rng } from './rng.js';
import { sgdStep, zeroGrads } from './tensor.js';

export interface TrainConfig {
  epochs: number;
  batchSize: number;
  resolution: number;
  learningRate: number;
  momentum: number;
}

/** Published full-scale settings; kept selectable but far beyond CPU budgets. */
export const PAPER_PRESET: TrainConfig = {
  epochs: 150, batchSize: 12, resolution: 672, learningRate: 0.01, momentum: 0.9,
};

/** Small preset that trains in minutes on one CPU core. */
export const DESK_PRESET: TrainConfig = {
  epochs: 40, batchSize: 4, resolution: 128, learningRate: 0.01, momentum: 0.9,
};

export function presetByName(name: string): TrainConfig {
  if (name === 'paper') return PAPER_PRESET;
  if (name === 'desk') return DESK_PRESET;
  throw new Error(`unknown preset ${name} (expected paper or desk)`);
}

export interface EpochLog {
  epoch: number;
  meanLoss: number;
  seconds: number;
}

export function train(model: DeepArModel, pages: Page[], cfg: TrainConfig,
                      seed = 0, log?: (e: EpochLog) => void): EpochLog[] {
  if (cfg.epochs <= 0 || cfg.batchSize <= 0 || cfg.resolution <= 0
      || cfg.learningRate <= 0 || cfg.momentum < 0 || cfg.momentum >= 1) {
    throw new Error('invalid training configuration');
  }
  if (cfg.resolution !== model.cfg.extractor.resolution) {
    throw new Error('train resolution must match the model resolution');
  }
  const usable = pages.filter((p) => p.truth && p.chars.length > 0);
  if (usable.length === 0) throw new Error('no trainable pages');
  const rng = new Rng(seed ^ 0x7ee1);
  const history: EpochLog[] = [];
  for (let epoch = 0; epoch < cfg.epochs; epoch++) {
    const t0 = Date.now();
    const order = rng.shuffle(usable.map((_, i) => i));
    let lossSum = 0;
    for (let b = 0; b < order.length; b += cfg.batchSize) {
      const batch = order.slice(b, b + cfg.batchSize);
      zeroGrads(model.params);
      for (const i of batch) lossSum += model.pageLoss(usable[i], true);
      sgdStep(model.params, cfg.learningRate, cfg.momentum, 1 / batch.length);
    }
    const entry = {
      epoch,
      meanLoss: lossSum / usable.length,
      seconds: (Date.now() - t0) / 1000,
    };
    history.push(entry);
    log?.(entry);
  }
  return history;
}

/** Mean teacher-forced loss without gradient accumulation. */
export function meanLoss(model: DeepArModel, pages: Page[]): number {
  const usable = pages.filter((p) => p.truth && p.chars.length > 0);
  let s = 0;
  for (const p of usable) s += model.pageLoss(p, false);
  return s / usable.length;
}

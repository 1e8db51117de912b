import { describe, expect, it } from 'vitest';

import { DESK_MODEL, DeepArModel, MissingGroundTruthError } from '../src/model.js';
import { train } from '../src/train.js';
import { Rng } from '../src/rng.js';
import { pageOf } from './helpers.js';

/** Single-column page with shuffled ids so geometry alone cannot leak the
 * answer through re-insertion. */
function shuffledColumnPage(n: number, seed: number) {
  const rng = new Rng(seed);
  const ids = rng.shuffle([...Array(n).keys()]);
  const boxes: Array<[number, number, number, number]> = new Array(n);
  for (let slot = 0; slot < n; slot++) {
    boxes[ids[slot]] = [0.5, (slot + 0.5) / n, 0.08, 0.8 / n];
  }
  const page = pageOf(boxes);
  page.truth = ids;
  return page;
}

const SMALL_MODEL = {
  extractor: { resolution: 32, c0: 4, c1: 8, c2: 12, cr: 8, c3: 8, embedDim: 16 },
  decoder: { dim: 16, heads: 4 },
};

describe('model basics', () => {
  it('emits one embedding per character', () => {
    const model = new DeepArModel(SMALL_MODEL, 3);
    const page = shuffledColumnPage(6, 1);
    expect(model.embeddings(page).length).toBe(6 * 16);
  });

  it('predicts a permutation for any page', () => {
    const model = new DeepArModel(SMALL_MODEL, 5);
    for (const n of [1, 2, 7, 15]) {
      const pred = model.predict(shuffledColumnPage(n, n));
      expect([...pred].sort((a, b) => a - b)).toEqual([...Array(n).keys()]);
    }
  });

  it('refuses to train on unlabeled pages', () => {
    const model = new DeepArModel(SMALL_MODEL, 5);
    const page = shuffledColumnPage(4, 2);
    page.truth = null;
    expect(() => model.pageLoss(page, true)).toThrow(MissingGroundTruthError);
  });

  it('checkpoints round-trip through JSON', async () => {
    const fs = await import('node:fs');
    const os = await import('node:os');
    const path = await import('node:path');
    const model = new DeepArModel(SMALL_MODEL, 11);
    const page = shuffledColumnPage(5, 3);
    const file = path.join(fs.mkdtempSync(path.join(os.tmpdir(), 'ckpt-')), 'm.json');
    model.save(file);
    const loaded = DeepArModel.load(file);
    expect(loaded.predict(page)).toEqual(model.predict(page));
    fs.rmSync(path.dirname(file), { recursive: true, force: true });
  });
});

describe('training dynamics', () => {
  it('initial loss is within 5% of ln(n+1) per step', () => {
    for (const [n, seed] of [[10, 21], [20, 22], [40, 23]] as const) {
      const model = new DeepArModel(DESK_MODEL, seed);
      const init = model.pageLoss(shuffledColumnPage(n, seed), false);
      const uniform = Math.log(n + 1);
      expect(Math.abs(init - uniform) / uniform).toBeLessThan(0.05);
    }
  });

  it('teacher-forced loss decreases over the first five epochs', () => {
    const model = new DeepArModel(SMALL_MODEL, 17);
    const pages = [1, 2, 3, 4].map((s) => shuffledColumnPage(8, s));
    const losses = train(model, pages, {
      epochs: 5, batchSize: 2, resolution: 32, learningRate: 0.01, momentum: 0.9,
    }, 17).map((e) => e.meanLoss);
    for (let i = 1; i < losses.length; i++) {
      expect(losses[i]).toBeLessThan(losses[i - 1] + 1e-6);
    }
  });

  it('overfit oracle: one 20-character page is reproduced exactly within '
     + '500 steps and the initial loss matches the uniform value', () => {
    const page = shuffledColumnPage(20, 77);
    const model = new DeepArModel(DESK_MODEL, 7);
    const init = model.pageLoss(page, false);
    expect(Math.abs(init - Math.log(21)) / Math.log(21)).toBeLessThan(0.05);
    train(model, [page], {
      epochs: 500, batchSize: 1, resolution: 128, learningRate: 0.01, momentum: 0.9,
    }, 1);
    expect(model.teacherForcedAccuracy(page)).toBe(1);
    expect(model.predict(page)).toEqual(page.truth);
  });
});

/** Desk-scale end-to-end check (the slow one: ~25 minutes of CPU training).
 *
 * Trains the desk preset on 200 synthetic mixed-layout pages produced by
 * the ordering harness's CLI, then must beat the fixed-threshold model's
 * edit-distance accuracy on a held-out warichu + chirashigaki split, as
 * scored by that same harness.  Requires the `yomijun` CLI on PATH; the
 * test skips when it is missing.
 */

import { execFileSync } from 'node:child_process';
import * as fs from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';

import { describe, expect, it } from 'vitest';

import { DESK_MODEL, DeepArModel } from '../src/model.js';
import { readPages, writePredictions } from '../src/pageio.js';
import { DESK_PRESET, train } from '../src/train.js';

function haveHarness(): boolean {
  try {
    execFileSync('yomijun', ['--version'], { stdio: 'pipe' });
    return true;
  } catch {
    return false;
  }
}

function synth(out: string, kind: string, pages: number, columns: number,
               chars: number, jitter: number, seed: number, book: string): void {
  execFileSync('yomijun', [
    'synth', '--kind', kind, '--pages', String(pages),
    '--columns', String(columns), '--chars-per-column', String(chars),
    '--jitter', String(jitter), '--seed', String(seed),
    '--book-id', book, '--out', out,
  ], { stdio: 'pipe' });
}

describe.skipIf(!haveHarness())('desk-scale generalization', () => {
  it('beats the fixed-threshold model on held-out warichu + chirashigaki', () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), 'desk-'));
    const trainDir = path.join(dir, 'train');
    const testDir = path.join(dir, 'test');
    synth(trainDir, 'regular_columns', 50, 3, 7, 0.15, 100, 'train-regular');
    synth(trainDir, 'irregular_spacing', 50, 4, 6, 0.2, 200, 'train-irregular');
    synth(trainDir, 'warichu', 50, 2, 6, 0.1, 300, 'train-warichu');
    synth(trainDir, 'chirashigaki', 50, 3, 8, 0.15, 400, 'train-chirashi');
    synth(testDir, 'warichu', 30, 2, 6, 0.1, 9300, 'test-warichu');
    synth(testDir, 'chirashigaki', 30, 3, 8, 0.15, 9400, 'test-chirashi');

    const trainPages = readPages([trainDir]);
    expect(trainPages.length).toBe(200);

    const started = Date.now();
    const model = new DeepArModel(DESK_MODEL, 0);
    train(model, trainPages, DESK_PRESET, 0, (e) => {
      if ((e.epoch + 1) % 5 === 0) {
        console.log(`epoch ${e.epoch + 1}/${DESK_PRESET.epochs}: `
          + `loss ${e.meanLoss.toFixed(4)}`);
      }
    });
    const hours = (Date.now() - started) / 3_600_000;
    expect(hours).toBeLessThan(2);

    const testPages = readPages([testDir]);
    expect(testPages.length).toBe(60);
    const preds = new Map<string, number[]>();
    for (const page of testPages) {
      const order = model.predict(page);
      // permutation check: no NotPermutation errors downstream
      expect([...order].sort((a, b) => a - b))
        .toEqual([...Array(page.chars.length).keys()]);
      preds.set(page.pageId, order);
    }
    const deepFile = path.join(dir, 'deep.txt');
    writePredictions(preds, deepFile);

    const simpleFile = path.join(dir, 'simple.txt');
    execFileSync('yomijun', ['order', testDir, '--model', 'simple',
                             '--out', simpleFile], { stdio: 'pipe' });
    const reportDir = path.join(dir, 'report');
    execFileSync('yomijun', ['eval', testDir,
                             '--preds', `deep=${deepFile}`,
                             '--preds', `simple=${simpleFile}`,
                             '--out', reportDir], { stdio: 'pipe' });
    const report = JSON.parse(
      fs.readFileSync(path.join(reportDir, 'report.json'), 'utf-8'));
    const deepAcc = report.models.deep.overall.accuracy;
    const simpleAcc = report.models.simple.overall.accuracy;
    console.log(`held-out accuracy: deep ${(100 * deepAcc).toFixed(2)} `
      + `vs simple ${(100 * simpleAcc).toFixed(2)} `
      + `(trained ${(hours * 60).toFixed(1)} min)`);
    expect(deepAcc).toBeGreaterThan(simpleAcc);
    fs.rmSync(dir, { recursive: true, force: true });
  }, 7_200_000);
});

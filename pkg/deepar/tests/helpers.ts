import { Page, Char } from '../src/pageio.js';

/** Build a page from normalized center/size tuples; truth = listed order. */
export function pageOf(
  boxes: Array<[number, number, number, number]>,
  truth?: number[],
): Page {
  const chars: Char[] = boxes.map(([cx, cy, w, h], id) => ({
    id, x: cx - w / 2, y: cy - h / 2, w, h, cx, cy,
  }));
  return {
    pageId: 'test',
    bookId: 'tb',
    width: 1000,
    height: 1000,
    chars,
    truth: truth ?? chars.map((c) => c.id),
  };
}

/** A little single-column page of n characters, top to bottom. */
export function columnPage(n: number): Page {
  const boxes: Array<[number, number, number, number]> = [];
  for (let i = 0; i < n; i++) {
    boxes.push([0.5, (i + 0.5) / n, 0.08, 0.8 / n]);
  }
  return pageOf(boxes);
}

export function maxRelativeError(analytic: number[], numeric: number[]): number {
  let worst = 0;
  for (let i = 0; i < analytic.length; i++) {
    const denom = Math.max(Math.abs(analytic[i]), Math.abs(numeric[i]), 1e-8);
    worst = Math.max(worst, Math.abs(analytic[i] - numeric[i]) / denom);
  }
  return worst;
}

export function levenshtein(a: number[], b: number[]): number {
  const n = a.length, m = b.length;
  let prev = Array.from({ length: n + 1 }, (_, j) => j);
  for (let i = 1; i <= m; i++) {
    const cur = [i, ...new Array<number>(n).fill(0)];
    for (let j = 1; j <= n; j++) {
      cur[j] = Math.min(prev[j] + 1, cur[j - 1] + 1,
                        prev[j - 1] + (a[j - 1] === b[i - 1] ? 0 : 1));
    }
    prev = cur;
  }
  return prev[n];
}

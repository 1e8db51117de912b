/** Canonical page files and prediction interchange (the boundary shared
 * with the evaluation harness).
 *
 * Page file: a `# yomijun-page ...` metadata line with pixel dimensions,
 * a CSV header, then one row per character with integer pixel geometry
 * and a reading_index (-1 = unknown).  Predictions: one line per page,
 * `page_id idx idx ...`.
 */

import * as fs from 'node:fs';
import * as path from 'node:path';

export const PAGE_MAGIC = '# yomijun-page';

export interface Char {
  id: number;
  x: number;   // normalized top-left
  y: number;
  w: number;
  h: number;
  cx: number;  // normalized center
  cy: number;
}

export interface Page {
  pageId: string;
  bookId: string;
  width: number;
  height: number;
  chars: Char[];
  truth: number[] | null;
}

export function parsePage(text: string): Page {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0 || !lines[0].startsWith(PAGE_MAGIC)) {
    throw new Error('not a canonical page file');
  }
  const meta = new Map<string, string>();
  for (const kv of lines[0].slice(PAGE_MAGIC.length).trim().split(/\s+/)) {
    const eq = kv.indexOf('=');
    if (eq > 0) meta.set(kv.slice(0, eq), kv.slice(eq + 1));
  }
  const width = Number(meta.get('image_width'));
  const height = Number(meta.get('image_height'));
  if (!Number.isFinite(width) || !Number.isFinite(height)) {
    throw new Error('page file lacks image dimensions');
  }
  const header = lines[1].split(',');
  const col = (name: string) => {
    const i = header.indexOf(name);
    if (i < 0) throw new Error(`missing column ${name}`);
    return i;
  };
  const ix = col('x'), iy = col('y'), iw = col('width'), ih = col('height');
  const iIdx = col('char_index'), iOrder = col('reading_index');
  const iPage = col('page_id');

  const chars: Char[] = [];
  const orders: number[] = [];
  let pageId = meta.get('page') ?? '';
  for (let r = 2; r < lines.length; r++) {
    const cells = lines[r].split(',');
    const id = Number(cells[iIdx]);
    if (id !== chars.length) throw new Error(`char_index out of sequence at row ${r}`);
    if (!pageId) pageId = cells[iPage];
    const x = Number(cells[ix]) / width;
    const y = Number(cells[iy]) / height;
    const w = Number(cells[iw]) / width;
    const h = Number(cells[ih]) / height;
    if (![x, y, w, h].every(Number.isFinite) || w <= 0 || h <= 0) {
      throw new Error(`bad geometry at row ${r}`);
    }
    chars.push({ id, x, y, w, h, cx: x + w / 2, cy: y + h / 2 });
    orders.push(Number(cells[iOrder]));
  }
  let truth: number[] | null = null;
  if (orders.length > 0 && orders.every((o) => o >= 0)) {
    truth = chars.map((c) => c.id)
      .sort((a, b) => orders[a] - orders[b] || a - b);
    const seen = new Set(orders);
    if (seen.size !== orders.length) throw new Error('duplicate reading indices');
  }
  return { pageId: pageId || 'page', bookId: meta.get('book') ?? '',
           width, height, chars, truth };
}

export function readPage(file: string): Page {
  return parsePage(fs.readFileSync(file, 'utf-8'));
}

export function collectPageFiles(roots: string[]): string[] {
  const out: string[] = [];
  const visit = (p: string) => {
    const st = fs.statSync(p);
    if (st.isDirectory()) {
      for (const entry of fs.readdirSync(p).sort()) visit(path.join(p, entry));
    } else if (p.endsWith('.csv')) {
      const head = fs.readFileSync(p, 'utf-8').slice(0, PAGE_MAGIC.length);
      if (head === PAGE_MAGIC) out.push(p);
    }
  };
  for (const r of roots) visit(r);
  return out.sort();
}

export function readPages(roots: string[]): Page[] {
  return collectPageFiles(roots).map(readPage);
}

export function predictionsToText(preds: Map<string, number[]>): string {
  const ids = [...preds.keys()].sort();
  const lines = ids.map((id) => [id, ...(preds.get(id) ?? [])].join(' '));
  return lines.join('\n') + (lines.length ? '\n' : '');
}

export function writePredictions(preds: Map<string, number[]>, file: string): void {
  fs.writeFileSync(file, predictionsToText(preds), 'utf-8');
}

export function readSplit(file: string): Map<string, string> {
  const out = new Map<string, string>();
  const lines = fs.readFileSync(file, 'utf-8').split(/\r?\n/);
  for (const line of lines.slice(1)) {
    if (!line) continue;
    const [pageId, split] = line.split(',');
    out.set(pageId, split);
  }
  return out;
}

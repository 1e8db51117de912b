/** Fill characters the decoder skipped back into the sequence.
 *
 * Each skipped character (taken in increasing id order) goes directly
 * before its nearest already-placed character when it sits above it
 * (smaller center-y), directly after otherwise.  Distance ties break
 * toward the earlier sequence position.  Characters inserted earlier count
 * as placed for later ones, so an entirely empty partial still yields a
 * full order.
 */

import { Page } from './pageio.js';

export class DuplicateInPartialError extends Error {}

export function reinsertSkipped(partial: number[], page: Page): number[] {
  const n = page.chars.length;
  const seen = new Set<number>();
  for (const id of partial) {
    if (seen.has(id)) throw new DuplicateInPartialError(`id ${id} repeated`);
    if (id < 0 || id >= n) throw new Error(`id ${id} not on page`);
    seen.add(id);
  }
  const byId = new Array(n);
  for (const c of page.chars) byId[c.id] = c;

  const order = partial.slice();
  for (let id = 0; id < n; id++) {
    if (seen.has(id)) continue;
    const c = byId[id];
    if (order.length === 0) {
      order.push(id);
      continue;
    }
    let bestPos = 0;
    let bestDist = Infinity;
    for (let pos = 0; pos < order.length; pos++) {
      const other = byId[order[pos]];
      const d = (c.cx - other.cx) ** 2 + (c.cy - other.cy) ** 2;
      if (d < bestDist) {
        bestDist = d;
        bestPos = pos;
      }
    }
    const neighbor = byId[order[bestPos]];
    order.splice(c.cy < neighbor.cy ? bestPos : bestPos + 1, 0, id);
  }
  return order;
}

"""Adaptive-threshold orderer with double-column detection.

Same scan shape as the fixed-threshold model, but every threshold derives
from the size statistics of the page under evaluation, so behavior is
invariant to uniform rescaling of the page contents:

* a candidate may extend the current column only while its minimum
  center-x distance to the column's members stays within
  ``width_multiplier`` mean character widths;
* the vertical column break is ``column_break_multiplier`` mean character
  heights;
* the column-start tiebreak band is one mean character width.

On top of the scan, a spanning-header test recognizes inline double
columns: a just-placed character whose box overlaps two mutually
x-disjoint characters sitting side by side immediately below it heads a
double block, which is read right sub-column first, then left, before the
scan resumes below the block.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidConfigError
from .model import Page, ReadingOrder, mean_char_height, mean_char_width


@dataclass(frozen=True)
class AdaptiveRulesConfig:
    width_multiplier: float = 1.0
    span_overlap_fraction: float = 0.25
    min_spanned: int = 2
    column_break_multiplier: float = 3.0

    def __post_init__(self) -> None:
        if min(self.width_multiplier, self.span_overlap_fraction,
               self.column_break_multiplier) <= 0:
            raise InvalidConfigError("adaptive-rules thresholds must be positive")
        if self.min_spanned < 2:
            raise InvalidConfigError("min_spanned must be >= 2")


def adaptive_order(page: Page, cfg: AdaptiveRulesConfig | None = None) -> ReadingOrder:
    cfg = cfg or AdaptiveRulesConfig()
    n = len(page.chars)
    if n == 0:
        return ReadingOrder(())
    chars = page.chars_by_id()
    cx = [c.center_x for c in chars]
    cy = [c.center_y for c in chars]
    x0 = [c.x for c in chars]
    x1 = [c.x + c.w for c in chars]
    w = [c.w for c in chars]

    mean_w = mean_char_width(page)
    mean_h = mean_char_height(page)
    memb_tol = cfg.width_multiplier * mean_w
    break_sq = (cfg.column_break_multiplier * mean_h) ** 2
    band = mean_w
    row_window = 0.5 * mean_h
    frac = cfg.span_overlap_fraction

    remaining = [True] * n
    order: list[int] = []
    column: list[int] = []

    def overlap(i: int, j: int) -> float:
        return min(x1[i], x1[j]) - max(x0[i], x0[j])

    def column_start() -> int:
        top = max(cx[i] for i in range(n) if remaining[i])
        return min(
            (cy[i], i) for i in range(n)
            if remaining[i] and cx[i] >= top - band
        )[1]

    def double_block(c: int) -> tuple[list[int], list[int]] | None:
        """Sub-columns of the double block headed by ``c``, or None.

        Spanned characters must substantially overlap the header's x-range;
        the block's two seeds are the mutually disjoint characters in the
        first row below the header.  Walking down, a character spanning
        both seeds (or neither) terminates the block.
        """
        cand = [
            i for i in range(n)
            if remaining[i] and cy[i] > cy[c]
            and overlap(c, i) >= frac * min(w[c], w[i])
        ]
        if len(cand) < cfg.min_spanned:
            return None
        cand.sort(key=lambda i: (cy[i], i))
        top_y = cy[cand[0]]
        row = [i for i in cand if cy[i] - top_y <= row_window]
        if len(row) != 2 or len(row) < cfg.min_spanned:
            return None
        a, b = row
        if overlap(a, b) > 0:
            return None
        right_seed, left_seed = (a, b) if cx[a] > cx[b] else (b, a)
        right, left = [right_seed], [left_seed]
        for i in cand:
            if i in row:
                continue
            on_right = overlap(i, right_seed) >= frac * min(w[i], w[right_seed])
            on_left = overlap(i, left_seed) >= frac * min(w[i], w[left_seed])
            if on_right == on_left:  # spans both sub-columns, or neither
                break
            (right if on_right else left).append(i)
        return right, left

    def place(i: int) -> None:
        order.append(i)
        remaining[i] = False
        column.append(i)

    current = -1
    while len(order) < n:
        if current >= 0:
            ccx, ccy = cx[current], cy[current]
            best, best_d = -1, float("inf")
            for i in range(n):
                if not remaining[i] or cy[i] <= ccy:
                    continue
                d = (cx[i] - ccx) ** 2 + (cy[i] - ccy) ** 2
                if d < best_d:
                    best, best_d = i, d
            if best < 0 or best_d > break_sq:
                current = -1
            elif min(abs(cx[best] - cx[m]) for m in column) > memb_tol:
                current = -1  # candidate sits outside the column's x-range
            else:
                current = best
        if current < 0:
            current = column_start()
            column = []
        place(current)
        block = double_block(current)
        if block is not None:
            for i in block[0] + block[1]:
                place(i)
            current = order[-1]
    return ReadingOrder(order)

"""Fixed-threshold scanning orderer.

Scans the page the way classical vertical text is read: start at the
top-right character, walk downward while the next character stays within a
fixed horizontal tolerance and a fixed distance, and when the column runs
out, restart from the top-right remaining character.  All thresholds are in
normalized page units and are configuration, not constants.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidConfigError
from .model import Page, ReadingOrder


@dataclass(frozen=True)
class SimpleRulesConfig:
    column_x_tolerance: float = 0.05
    column_break_distance: float = 0.15
    start_tiebreak_band: float = 0.03

    def __post_init__(self) -> None:
        if min(self.column_x_tolerance, self.column_break_distance,
               self.start_tiebreak_band) <= 0:
            raise InvalidConfigError("simple-rules thresholds must be positive")


def simple_order(page: Page, cfg: SimpleRulesConfig | None = None) -> ReadingOrder:
    """Order a page's characters with fixed thresholds.

    Column start: the remaining character with the greatest center-x wins;
    among remaining characters whose center-x lies within
    ``start_tiebreak_band`` of that maximum, the topmost (smallest center-y)
    is taken instead, so jitter cannot promote a lower character.

    Descent: from the current character, candidates are the remaining
    characters strictly below it with a center-x offset within
    ``column_x_tolerance``; the candidate at minimal Euclidean center
    distance continues the column unless that distance exceeds
    ``column_break_distance``, in which case the column ends and the scan
    restarts from a fresh column start.  Distance ties break toward the
    lower id.
    """
    cfg = cfg or SimpleRulesConfig()
    chars = page.chars_by_id()
    n = len(chars)
    cx = [c.center_x for c in chars]
    cy = [c.center_y for c in chars]
    break_sq = cfg.column_break_distance ** 2

    remaining = [True] * n
    order: list[int] = []

    def column_start() -> int:
        top = max(cx[i] for i in range(n) if remaining[i])
        return min(
            (cy[i], i) for i in range(n)
            if remaining[i] and cx[i] >= top - cfg.start_tiebreak_band
        )[1]

    current = -1
    for _ in range(n):
        if current >= 0:
            ccx, ccy = cx[current], cy[current]
            best, best_d = -1, float("inf")
            for i in range(n):
                if not remaining[i] or cy[i] <= ccy:
                    continue
                dx = cx[i] - ccx
                if abs(dx) > cfg.column_x_tolerance:
                    continue
                d = dx * dx + (cy[i] - ccy) ** 2
                if d < best_d:
                    best, best_d = i, d
            current = best if 0 <= best and best_d <= break_sq else -1
        if current < 0:
            current = column_start()
        order.append(current)
        remaining[current] = False
    return ReadingOrder(order)

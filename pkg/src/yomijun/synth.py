"""Synthetic page layouts with known ground-truth reading order.

Pages follow the classical vertical-text convention: columns are read
right-to-left and characters top-to-bottom within a column.  Four layout
kinds are generated:

* ``regular_columns``   -- an even grid of columns.
* ``irregular_spacing`` -- column gaps and row pitches vary per column, and
  each column's rows carry a random vertical phase.
* ``warichu``           -- each column embeds one double block: two narrow
  side-by-side sub-columns read right-sub-column first, then left.
* ``chirashigaki``      -- columns drift horizontally along a smooth curve,
  with varied starts and pitches.

Character ids are shuffled so that input order carries no information about
the reading order.  Generation is deterministic in ``rng_seed``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidConfigError
from .model import Book, CharBox, Page, ReadingOrder

MARGIN = 0.05
_HIRAGANA = (0x3042, 0x3094)


class LayoutKind(str, Enum):
    REGULAR_COLUMNS = "regular_columns"
    IRREGULAR_SPACING = "irregular_spacing"
    WARICHU = "warichu"
    CHIRASHIGAKI = "chirashigaki"


@dataclass(frozen=True)
class SynthConfig:
    layout_kind: LayoutKind
    n_columns: int = 3
    chars_per_column: int = 8
    jitter: float = 0.0
    rng_seed: int = 0
    page_id: str = ""
    image_width: int = 1000
    image_height: int = 1400

    def __post_init__(self) -> None:
        object.__setattr__(self, "layout_kind", LayoutKind(self.layout_kind))
        if self.n_columns < 1 or self.chars_per_column < 1:
            raise InvalidConfigError("n_columns and chars_per_column must be >= 1")
        if self.jitter < 0:
            raise InvalidConfigError("jitter must be non-negative")
        if self.layout_kind is LayoutKind.REGULAR_COLUMNS and self.jitter >= 0.5:
            # keeps nearest-column assignment unambiguous, so the generated
            # order is the unique clean-layout reading
            raise InvalidConfigError("regular_columns requires jitter < 0.5")
        if self.layout_kind is LayoutKind.WARICHU and self.chars_per_column < 3:
            raise InvalidConfigError("warichu needs chars_per_column >= 3 "
                                     "(a header plus a two-row double block)")


# A slot is one character placement in reading order: (cx, cy, w, h).
_Slot = tuple[float, float, float, float]


def _regular_slots(cfg: SynthConfig, rng: random.Random) -> list[_Slot]:
    span = 1 - 2 * MARGIN
    px = span / cfg.n_columns
    py = span / cfg.chars_per_column
    s_w, s_h = 0.6 * px, 0.6 * py
    slots = []
    for k in range(cfg.n_columns):
        cx = 1 - MARGIN - px * (k + 0.5)
        for i in range(cfg.chars_per_column):
            slots.append((cx, MARGIN + py * (i + 0.5), s_w, s_h))
    return slots


def _irregular_slots(cfg: SynthConfig, rng: random.Random) -> list[_Slot]:
    span = 1 - 2 * MARGIN
    weights = [rng.uniform(0.5, 1.5) for _ in range(cfg.n_columns)]
    total = sum(weights)
    pitches = [span * u / total for u in weights]
    w = 0.55 * min(pitches)

    base_py = span / (cfg.chars_per_column * 1.3)
    row_pitches = [base_py * rng.uniform(0.7, 1.3) for _ in range(cfg.n_columns)]
    h = 0.6 * min(row_pitches)

    slots = []
    right = 1 - MARGIN
    for k in range(cfg.n_columns):
        cx = right - pitches[k] / 2
        right -= pitches[k]
        py = row_pitches[k]
        phase = rng.uniform(0, max(0.0, span - cfg.chars_per_column * py))
        for i in range(cfg.chars_per_column):
            slots.append((cx, MARGIN + phase + py * (i + 0.5), w, h))
    return slots


def _warichu_slots(cfg: SynthConfig, rng: random.Random) -> list[_Slot]:
    """Regular slot grid where each column replaces a run of slots by a
    double block: two half-width sub-columns, right one read first."""
    span = 1 - 2 * MARGIN
    px = span / cfg.n_columns
    py = span / cfg.chars_per_column
    s = 0.6 * min(px, py)
    sub_w, sub_h, sub_dx = 0.38 * s, 0.5 * s, 0.27 * s

    slots = []
    for k in range(cfg.n_columns):
        cx = 1 - MARGIN - px * (k + 0.5)
        depth = min(rng.choice((2, 2, 3)), cfg.chars_per_column - 1)
        header = rng.randint(0, cfg.chars_per_column - 1 - depth)
        block_rows = range(header + 1, header + 1 + depth)

        def row_y(i: int) -> float:
            return MARGIN + py * (i + 0.5)

        for i in range(cfg.chars_per_column):
            if i not in block_rows:
                slots.append((cx, row_y(i), s, s))
            if i == header:
                for j in block_rows:  # right sub-column first
                    slots.append((cx + sub_dx, row_y(j), sub_w, sub_h))
                for j in block_rows:
                    slots.append((cx - sub_dx, row_y(j), sub_w, sub_h))
    return slots


def _chirashigaki_slots(cfg: SynthConfig, rng: random.Random) -> list[_Slot]:
    span = 1 - 2 * MARGIN
    px = span / cfg.n_columns
    py = span / cfg.chars_per_column
    s = 0.6 * min(px, py)
    slots = []
    for k in range(cfg.n_columns):
        cx = 1 - MARGIN - px * (k + 0.5)
        amp = rng.uniform(0.5, 1.5) * s
        freq = rng.uniform(0.5, 1.5)
        phase = rng.uniform(0, 1)
        y_off = rng.uniform(0, 0.25 * span)
        pitch = (span - y_off) / cfg.chars_per_column * rng.uniform(0.8, 1.0)
        for i in range(cfg.chars_per_column):
            t = i / max(1, cfg.chars_per_column - 1)
            drift = amp * math.sin(2 * math.pi * (freq * t + phase))
            slots.append((cx + drift, MARGIN + y_off + pitch * (i + 0.5), s, s))
    return slots


_BUILDERS = {
    LayoutKind.REGULAR_COLUMNS: _regular_slots,
    LayoutKind.IRREGULAR_SPACING: _irregular_slots,
    LayoutKind.WARICHU: _warichu_slots,
    LayoutKind.CHIRASHIGAKI: _chirashigaki_slots,
}


def generate_page(cfg: SynthConfig) -> Page:
    """Build one synthetic page; ground truth is the construction order."""
    rng = random.Random(cfg.rng_seed)
    slots = _BUILDERS[cfg.layout_kind](cfg, rng)
    n = len(slots)

    ids = list(range(n))
    rng.shuffle(ids)

    boxes: list[CharBox | None] = [None] * n
    for slot_idx, (cx, cy, w, h) in enumerate(slots):
        dx = rng.uniform(-cfg.jitter, cfg.jitter) * w
        dy = rng.uniform(-cfg.jitter, cfg.jitter) * h
        x = min(max(cx - w / 2 + dx, 0.0), 1.0 - w)
        y = min(max(cy - h / 2 + dy, 0.0), 1.0 - h)
        label = chr(rng.randrange(*_HIRAGANA))
        boxes[ids[slot_idx]] = CharBox(id=ids[slot_idx], label=label,
                                       x=x, y=y, w=w, h=h)

    page_id = cfg.page_id or f"{cfg.layout_kind.value}-{cfg.rng_seed:06d}"
    return Page(
        page_id=page_id,
        image_width=cfg.image_width,
        image_height=cfg.image_height,
        chars=tuple(boxes),  # type: ignore[arg-type]
        ground_truth=ReadingOrder(ids),
    )


def generate_book(kind: LayoutKind | str, n_pages: int, n_columns: int = 3,
                  chars_per_column: int = 8, jitter: float = 0.0,
                  seed: int = 0, book_id: str = "") -> Book:
    """A book of ``n_pages`` pages with per-page derived seeds."""
    kind = LayoutKind(kind)
    book_id = book_id or f"synth-{kind.value}"
    pages = []
    for i in range(n_pages):
        cfg = SynthConfig(
            layout_kind=kind, n_columns=n_columns,
            chars_per_column=chars_per_column, jitter=jitter,
            rng_seed=seed * 1_000_003 + i,
            page_id=f"{book_id}-{i:05d}",
        )
        pages.append(generate_page(cfg))
    return Book(book_id=book_id, pages=tuple(pages))

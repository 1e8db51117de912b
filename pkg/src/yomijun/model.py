"""Core domain types: character boxes, pages, books, and reading orders.

All geometry is kept in normalized page units: x and y grow right and down,
and a full page spans [0, 1] on both axes.  Pixel coordinates only exist at
import/export and render time.  Every type is an immutable value, so pages
can be shared freely across threads or processes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import EmptyPageError, NotPermutationError

# Slack for boxes that touch the page edge after pixel normalization.
EDGE_EPSILON = 1e-6


@dataclass(frozen=True)
class CharBox:
    """One character occurrence: an opaque label plus its bounding box.

    ``x``/``y`` are the top-left corner; ``w``/``h`` the box size.  The label
    is carried through untouched -- ordering logic never inspects it.
    """

    id: int
    label: str
    x: float
    y: float
    w: float
    h: float

    def __post_init__(self) -> None:
        if not (self.w > 0 and self.h > 0):
            raise ValueError(f"box {self.id}: width/height must be positive")
        if self.x < 0 or self.y < 0:
            raise ValueError(f"box {self.id}: negative corner ({self.x}, {self.y})")
        if self.x + self.w > 1 + EDGE_EPSILON or self.y + self.h > 1 + EDGE_EPSILON:
            raise ValueError(f"box {self.id}: extends past the page edge")

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + self.w / 2, self.y + self.h / 2)

    @property
    def center_x(self) -> float:
        return self.x + self.w / 2

    @property
    def center_y(self) -> float:
        return self.y + self.h / 2


def center(c: CharBox) -> tuple[float, float]:
    """Center point of a box in normalized units."""
    return c.center


def x_overlap(a: CharBox, b: CharBox) -> float:
    """Length of the horizontal overlap of two boxes (0 when disjoint)."""
    return max(0.0, min(a.x + a.w, b.x + b.w) - max(a.x, b.x))


@dataclass(frozen=True, init=False)
class ReadingOrder(Sequence):
    """A permutation of a page's character ids, in reading sequence."""

    sequence: tuple[int, ...]

    def __init__(self, sequence: Sequence[int] = ()) -> None:
        object.__setattr__(self, "sequence", tuple(int(i) for i in sequence))

    def __len__(self) -> int:
        return len(self.sequence)

    def __getitem__(self, i):
        return self.sequence[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.sequence)


@dataclass(frozen=True)
class Page:
    """A set of character boxes on one page image.

    Invariants: char ids are exactly 0..n-1, and the ground truth (when
    present) is a permutation of them.
    """

    page_id: str
    image_width: int
    image_height: int
    chars: tuple[CharBox, ...]
    ground_truth: ReadingOrder | None = None

    def __post_init__(self) -> None:
        if self.image_width <= 0 or self.image_height <= 0:
            raise ValueError(f"page {self.page_id}: non-positive image size")
        object.__setattr__(self, "chars", tuple(self.chars))
        ids = sorted(c.id for c in self.chars)
        if ids != list(range(len(self.chars))):
            raise ValueError(f"page {self.page_id}: char ids must be 0..n-1")
        if self.ground_truth is not None:
            check_permutation(self.ground_truth, len(self.chars), self.page_id)

    def __len__(self) -> int:
        return len(self.chars)

    def char(self, char_id: int) -> CharBox:
        for c in self.chars:
            if c.id == char_id:
                return c
        raise KeyError(char_id)

    def chars_by_id(self) -> list[CharBox]:
        """Chars indexed so that result[i].id == i."""
        out: list[CharBox | None] = [None] * len(self.chars)
        for c in self.chars:
            out[c.id] = c
        return out  # type: ignore[return-value]


def check_permutation(order: Sequence[int], n: int, page_id: str = "?") -> None:
    """Raise NotPermutationError unless ``order`` is a permutation of 0..n-1."""
    if len(order) != n or sorted(order) != list(range(n)):
        raise NotPermutationError(
            f"page {page_id}: order of length {len(order)} is not a "
            f"permutation of 0..{n - 1}"
        )


def is_permutation(order: Sequence[int], n: int) -> bool:
    try:
        check_permutation(order, n)
    except NotPermutationError:
        return False
    return True


def mean_char_width(p: Page) -> float:
    """Arithmetic mean of box widths over the page."""
    if not p.chars:
        raise EmptyPageError(f"page {p.page_id} has no characters")
    return sum(c.w for c in p.chars) / len(p.chars)


def mean_char_height(p: Page) -> float:
    """Arithmetic mean of box heights over the page."""
    if not p.chars:
        raise EmptyPageError(f"page {p.page_id} has no characters")
    return sum(c.h for c in p.chars) / len(p.chars)


@dataclass(frozen=True)
class Book:
    """A titled collection of pages; page ids stay unique within the book."""

    book_id: str
    pages: tuple[Page, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "pages", tuple(self.pages))
        seen = set()
        for p in self.pages:
            if p.page_id in seen:
                raise ValueError(f"book {self.book_id}: duplicate page {p.page_id}")
            seen.add(p.page_id)

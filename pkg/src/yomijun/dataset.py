"""Dataset wrapper: books of pages plus a train/validation split."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import InvalidConfigError
from .model import Book, Page

TRAIN = "train"
VALIDATION = "validation"


@dataclass(frozen=True)
class Dataset:
    """Page ids are unique across the whole dataset, and the split assigns
    every page to exactly one of train/validation."""

    books: tuple[Book, ...]
    split: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "books", tuple(self.books))
        ids = [p.page_id for b in self.books for p in b.pages]
        if len(set(ids)) != len(ids):
            raise ValueError("page ids must be unique across the dataset")
        if not self.split:
            object.__setattr__(self, "split", {i: TRAIN for i in ids})
        if set(self.split) != set(ids):
            raise ValueError("split must cover every page exactly once")
        bad = {v for v in self.split.values()} - {TRAIN, VALIDATION}
        if bad:
            raise ValueError(f"unknown split labels: {sorted(bad)}")

    def pages(self) -> Iterator[tuple[Book, Page]]:
        for b in self.books:
            for p in b.pages:
                yield b, p

    def n_pages(self) -> int:
        return sum(len(b.pages) for b in self.books)

    def page(self, page_id: str) -> Page:
        for _, p in self.pages():
            if p.page_id == page_id:
                return p
        raise KeyError(page_id)

    def subset(self, label: str) -> "Dataset":
        """The dataset restricted to one split label."""
        books = []
        for b in self.books:
            pages = tuple(p for p in b.pages if self.split[p.page_id] == label)
            if pages:
                books.append(Book(book_id=b.book_id, pages=pages))
        split = {p.page_id: label for b in books for p in b.pages}
        return Dataset(books=tuple(books), split=split)


def from_books(books: Iterable[Book]) -> Dataset:
    return Dataset(books=tuple(books))


def split_dataset(d: Dataset, ratio: float, seed: int) -> Dataset:
    """Reassign the split: a uniform sample of round(ratio * n) pages goes to
    train, the rest to validation.  Deterministic in ``seed``."""
    if not 0 < ratio < 1:
        raise InvalidConfigError("split ratio must be in (0, 1)")
    ids = [p.page_id for _, p in d.pages()]
    n_train = int(round(ratio * len(ids)))
    rng = random.Random(seed)
    train = set(rng.sample(ids, n_train))
    split = {i: (TRAIN if i in train else VALIDATION) for i in ids}
    return Dataset(books=d.books, split=split)

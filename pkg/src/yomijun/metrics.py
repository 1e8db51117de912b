"""Sequence-ordering metrics: edit-distance accuracy and query recall.

Position-wise accuracy is useless for orderings (one early slip misaligns
everything), so pages are scored by normalized edit distance instead, and
by query recall: the fraction of contiguous ground-truth windows of a given
length that survive, in place, in the prediction.  A permutation prediction
always has recall 1 at length 1.

Aggregates over pages pool numerators and denominators -- a book's score is
the ratio of summed counts, not a mean of page percentages.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .dataset import Dataset
from .errors import (
    BadLengthError,
    LengthMismatchError,
    MissingPredictionError,
    NotPermutationError,
)
from .model import ReadingOrder

# Query lengths reported by default; the pooled 2-20 aggregate is always
# computed from every length in that range.
DEFAULT_QUERY_LENGTHS = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 25, 30, 40, 50)
POOLED_RANGE = range(2, 21)


def edit_distance(a: Sequence[int], b: Sequence[int]) -> int:
    """Levenshtein distance with unit insert/delete/replace costs."""
    n, m = len(a), len(b)
    if n > m:
        a, b, n, m = b, a, m, n
    current = list(range(n + 1))
    for i in range(1, m + 1):
        previous, current = current, [i] + [0] * n
        bi = b[i - 1]
        for j in range(1, n + 1):
            current[j] = min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (a[j - 1] != bi),
            )
    return current[n]


def accuracy(gt: Sequence[int], pred: Sequence[int]) -> float:
    """1 - d(gt, pred) / |gt|; requires pred to be a permutation of gt."""
    if len(gt) == 0:
        raise LengthMismatchError("accuracy needs a non-empty ground truth")
    if len(pred) != len(gt):
        raise LengthMismatchError(
            f"prediction length {len(pred)} != ground truth length {len(gt)}"
        )
    if sorted(pred) != sorted(gt):
        raise NotPermutationError("prediction is not a permutation of the ground truth")
    return 1.0 - edit_distance(gt, pred) / len(gt)


def _adjacency(gt: Sequence[int], pred: Sequence[int]) -> list[bool]:
    """flags[i]: gt[i] and gt[i+1] are adjacent, in order, in pred."""
    pos = {c: k for k, c in enumerate(pred)}
    return [pos[gt[i + 1]] == pos[gt[i]] + 1 for i in range(len(gt) - 1)]


def _matched_starts(adj: Sequence[bool], length: int) -> set[int]:
    """Start indices of ground-truth windows that appear in-place."""
    n = len(adj) + 1
    if length == 1:
        return set(range(n))
    starts: set[int] = set()
    run = 0
    for i, ok in enumerate(adj):
        run = run + 1 if ok else 0
        if run >= length - 1:
            starts.add(i - length + 2)
    return starts


def query_recall(gt: Sequence[int], pred: Sequence[int], length: int) -> tuple[int, int]:
    """(matched, total) contiguous ground-truth windows of ``length``.

    total is |gt| - length + 1; a window counts as matched when its ids
    occur as a contiguous run, in order, in the prediction.
    """
    if not 1 <= length <= len(gt):
        raise BadLengthError(f"query length {length} outside [1, {len(gt)}]")
    if sorted(pred) != sorted(gt):
        raise NotPermutationError("prediction is not a permutation of the ground truth")
    matched = _matched_starts(_adjacency(gt, pred), length)
    return len(matched), len(gt) - length + 1


@dataclass(frozen=True)
class PageMetrics:
    page_id: str
    book_id: str
    n_chars: int
    edit_dist: int
    accuracy: float
    # length -> (matched, total); covers requested lengths plus 2..20
    recall_counts: dict[int, tuple[int, int]]

    def recall(self, length: int) -> float:
        matched, total = self.recall_counts[length]
        return matched / total


@dataclass(frozen=True)
class GroupMetrics:
    n_pages: int
    n_chars: int
    edit_total: int
    accuracy: float
    recall_counts: dict[int, tuple[int, int]]
    recall_2_20: float | None

    def recall(self, length: int) -> float | None:
        matched, total = self.recall_counts.get(length, (0, 0))
        return matched / total if total else None


@dataclass(frozen=True)
class EvalReport:
    lengths: tuple[int, ...]
    per_page: dict[str, PageMetrics]
    per_book: dict[str, GroupMetrics]
    overall: GroupMetrics


def _pool(pages: list[PageMetrics], lengths: Sequence[int]) -> GroupMetrics:
    n_chars = sum(p.n_chars for p in pages)
    edit_total = sum(p.edit_dist for p in pages)
    counts: dict[int, tuple[int, int]] = {}
    for length in sorted(set(lengths) | set(POOLED_RANGE)):
        matched = sum(p.recall_counts.get(length, (0, 0))[0] for p in pages)
        total = sum(p.recall_counts.get(length, (0, 0))[1] for p in pages)
        counts[length] = (matched, total)
    pooled_m = sum(counts[length][0] for length in POOLED_RANGE)
    pooled_t = sum(counts[length][1] for length in POOLED_RANGE)
    return GroupMetrics(
        n_pages=len(pages),
        n_chars=n_chars,
        edit_total=edit_total,
        accuracy=1.0 - edit_total / n_chars if n_chars else 1.0,
        recall_counts=counts,
        recall_2_20=pooled_m / pooled_t if pooled_t else None,
    )


def evaluate_page(page_id: str, book_id: str, gt: Sequence[int],
                  pred: Sequence[int], lengths: Sequence[int]) -> PageMetrics:
    n = len(gt)
    if n == 0:
        # degenerate page: perfect by convention, no recall denominators
        return PageMetrics(page_id, book_id, 0, 0, 1.0, {})
    acc = accuracy(gt, pred)
    adj = _adjacency(gt, pred)
    counts = {}
    for length in sorted(set(lengths) | set(POOLED_RANGE)):
        if 1 <= length <= n:
            counts[length] = (len(_matched_starts(adj, length)), n - length + 1)
    return PageMetrics(page_id, book_id, n, edit_distance(gt, pred), acc, counts)


def evaluate(d: Dataset, preds: Mapping[str, ReadingOrder],
             lengths: Sequence[int] = DEFAULT_QUERY_LENGTHS) -> EvalReport:
    """Score every ground-truthed page of ``d`` against ``preds``."""
    per_page: dict[str, PageMetrics] = {}
    by_book: dict[str, list[PageMetrics]] = {}
    for book, page in d.pages():
        if page.ground_truth is None:
            continue
        if page.page_id not in preds:
            raise MissingPredictionError(
                f"missing prediction for page '{page.page_id}'"
            )
        pm = evaluate_page(page.page_id, book.book_id, page.ground_truth,
                           preds[page.page_id], lengths)
        per_page[page.page_id] = pm
        by_book.setdefault(book.book_id, []).append(pm)
    per_book = {b: _pool(ps, lengths) for b, ps in by_book.items()}
    overall = _pool(list(per_page.values()), lengths)
    return EvalReport(tuple(sorted(set(lengths))), per_page, per_book, overall)

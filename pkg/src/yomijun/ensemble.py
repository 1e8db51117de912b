"""Combining orderers by pooling their query windows.

Different orderers fail on different pages, so taking the union of the
length-L windows each one predicts raises recall (a ground-truth window
counts as soon as one model preserves it) at a cost in precision (every
distinct predicted window becomes a candidate result).  Useful when recall
dominates, e.g. feeding a keyword-search index.
"""

from __future__ import annotations

from typing import Sequence

from .errors import BadLengthError, NotPermutationError
from .metrics import _adjacency, _matched_starts


def _validate(gt: Sequence[int], preds: Sequence[Sequence[int]], length: int) -> None:
    if not 1 <= length <= len(gt):
        raise BadLengthError(f"query length {length} outside [1, {len(gt)}]")
    want = sorted(gt)
    for k, p in enumerate(preds):
        if sorted(p) != want:
            raise NotPermutationError(
                f"prediction {k} is not a permutation of the ground truth"
            )


def union_matched(gt: Sequence[int], preds: Sequence[Sequence[int]],
                  length: int) -> tuple[int, int]:
    """(matched, total): ground-truth windows preserved by >= 1 prediction."""
    _validate(gt, preds, length)
    starts: set[int] = set()
    for p in preds:
        starts |= _matched_starts(_adjacency(gt, p), length)
    return len(starts), len(gt) - length + 1


def union_recall(gt: Sequence[int], preds: Sequence[Sequence[int]],
                 length: int) -> float:
    matched, total = union_matched(gt, preds, length)
    return matched / total


def union_candidates(gt: Sequence[int], preds: Sequence[Sequence[int]],
                     length: int) -> tuple[int, int]:
    """(true, total) over the distinct length-L windows of all predictions;
    a window is true when it occurs in-place in the ground truth."""
    _validate(gt, preds, length)
    candidates: set[tuple[int, ...]] = set()
    for p in preds:
        candidates |= {tuple(p[i:i + length]) for i in range(len(p) - length + 1)}
    pos = {c: k for k, c in enumerate(gt)}
    true = sum(
        1 for cand in candidates
        if all(pos[cand[k + 1]] == pos[cand[k]] + 1 for k in range(length - 1))
    )
    return true, len(candidates)


def union_precision(gt: Sequence[int], preds: Sequence[Sequence[int]],
                    length: int) -> float:
    """Fraction of distinct predicted windows that are in-place ground-truth
    windows.  Duplicate windows across models collapse, so identical models
    leave precision unchanged."""
    true, total = union_candidates(gt, preds, length)
    return true / total

"""Reading-order prediction and evaluation for historical page layouts.

Characters arrive as unordered labeled bounding boxes; orderers turn them
into reading sequences (columns right-to-left, top-to-bottom within a
column, with double-column and irregular-layout handling), and the metrics
suite scores predictions by edit-distance accuracy and query recall.
"""

from .adaptive_rules import AdaptiveRulesConfig, adaptive_order
from .dataset import Dataset, from_books, split_dataset
from .ensemble import union_candidates, union_matched, union_precision, union_recall
from .errors import (
    BadLengthError,
    BoxOutOfBoundsError,
    DuplicateCharIdError,
    EmptyPageError,
    InvalidConfigError,
    LengthMismatchError,
    MalformedRowError,
    MissingPredictionError,
    NotPermutationError,
    YomijunError,
)
from .metrics import (
    DEFAULT_QUERY_LENGTHS,
    EvalReport,
    accuracy,
    edit_distance,
    evaluate,
    query_recall,
)
from .model import (
    Book,
    CharBox,
    Page,
    ReadingOrder,
    center,
    is_permutation,
    mean_char_height,
    mean_char_width,
    x_overlap,
)
from .render import RenderSpec, render_paths
from .simple_rules import SimpleRulesConfig, simple_order
from .synth import LayoutKind, SynthConfig, generate_book, generate_page

__version__ = "0.1.0"

__all__ = [
    "AdaptiveRulesConfig", "adaptive_order",
    "Dataset", "from_books", "split_dataset",
    "union_candidates", "union_matched", "union_precision", "union_recall",
    "BadLengthError", "BoxOutOfBoundsError", "DuplicateCharIdError",
    "EmptyPageError", "InvalidConfigError", "LengthMismatchError",
    "MalformedRowError", "MissingPredictionError", "NotPermutationError",
    "YomijunError",
    "DEFAULT_QUERY_LENGTHS", "EvalReport", "accuracy", "edit_distance",
    "evaluate", "query_recall",
    "Book", "CharBox", "Page", "ReadingOrder", "center", "is_permutation",
    "mean_char_height", "mean_char_width", "x_overlap",
    "RenderSpec", "render_paths",
    "SimpleRulesConfig", "simple_order",
    "LayoutKind", "SynthConfig", "generate_book", "generate_page",
]

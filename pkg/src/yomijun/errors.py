"""Exception types raised by the yomijun library."""


class YomijunError(Exception):
    """Base class for all library errors."""


class EmptyPageError(YomijunError):
    """An operation that needs at least one character got an empty page."""


class MalformedRowError(YomijunError):
    """A coordinate-file row has missing, non-numeric, or negative geometry."""


class DuplicateCharIdError(YomijunError):
    """Two rows of one page carry the same reading-order index."""


class BoxOutOfBoundsError(YomijunError):
    """A bounding box extends more than one pixel past the image edge."""


class InvalidConfigError(YomijunError):
    """A synthesis or model configuration violates its invariants."""


class LengthMismatchError(YomijunError):
    """Two sequences that must have equal length do not."""


class NotPermutationError(YomijunError):
    """A predicted order is not a permutation of the expected ids."""


class BadLengthError(YomijunError):
    """A query length is outside [1, sequence length]."""


class MissingPredictionError(YomijunError):
    """Evaluation was asked to score a page that has no prediction."""

"""Exception types shared across the toolkit."""


class PhishlensError(Exception):
    """Base class for all toolkit errors."""


class EmptyInput(PhishlensError):
    """Raised when a URL string is empty or whitespace only."""


class MalformedUrl(PhishlensError):
    """Raised when a URL cannot be decomposed into host and path."""


class FileUnreadable(PhishlensError):
    """Raised when an input feed or data file cannot be opened."""


class NoUrlsFound(PhishlensError):
    """Raised when a feed file yields zero URLs."""


class SchemaMismatch(PhishlensError):
    """Raised when a feature matrix or row does not match the canonical schema."""


class SingleClassData(PhishlensError):
    """Raised when training data contains only one class."""


class UnlabeledRow(PhishlensError):
    """Raised when training data contains a row without a label."""


class KindMismatch(PhishlensError):
    """Raised when a loaded model file is not of the expected kind."""


class CorruptModel(PhishlensError):
    """Raised when a model file is truncated or structurally invalid."""

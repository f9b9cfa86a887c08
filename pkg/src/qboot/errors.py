"""Exception hierarchy shared by the qboot modules."""


class QBootError(Exception):
    """Base class for all library errors."""


class ShapeMismatchError(QBootError, ValueError):
    """Two objects live in different ambient cubes."""


class ResourceGuardError(QBootError):
    """A memory or work guard would be exceeded."""

    def __init__(self, message, estimate=None, limit=None):
        super().__init__(message)
        self.estimate = estimate
        self.limit = limit


class OutOfRangeError(QBootError, ValueError):
    """A step index lies outside the range a configuration makes statements about."""


class NotPercolatingError(QBootError, ValueError):
    """An operation requires a seed whose closure is the whole cube."""

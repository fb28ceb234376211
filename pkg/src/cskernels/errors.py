"""Exception types shared across the package."""


class CsKernelsError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParams(CsKernelsError, ValueError):
    """A parameter is outside its admissible domain (e.g. a series pole)."""


class NonConvergence(CsKernelsError, RuntimeError):
    """An iterative routine exhausted its budget before meeting its tolerance."""


class DimensionMismatch(CsKernelsError, ValueError):
    """Two vectors (or a model and a query point) disagree on dimension."""


class SizeLimitExceeded(CsKernelsError, ValueError):
    """A dense routine was asked to handle more rows than it supports."""


class SingleClassData(CsKernelsError, ValueError):
    """Training data contains only one class label."""


class InvalidSize(CsKernelsError, ValueError):
    """Requested sample count is too small to build the dataset."""


class InvalidFactor(CsKernelsError, ValueError):
    """Circle radius factor must lie strictly between 0 and 1."""


class DegenerateSplit(CsKernelsError, ValueError):
    """A train/test split left one side without both classes."""


class TooManyFolds(CsKernelsError, ValueError):
    """Fold count exceeds the size of the smallest class."""


class SeriesFailure(CsKernelsError, RuntimeError):
    """A geometry quantity could not be evaluated because the underlying
    series evaluation failed."""

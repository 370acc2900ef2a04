"""Exception types shared across the package.

Builtin exceptions are reused where they already say the right thing:
``OverflowError`` for hash projections that exceed the 64-bit bucket range,
``OSError`` for plain I/O failures.
"""


class FunclshError(Exception):
    """Base class for all funclsh-specific errors."""


class DomainError(FunclshError):
    """An evaluation point lies outside a function's domain."""


class NonFiniteError(FunclshError):
    """An evaluator produced NaN or infinity."""


class ParseError(FunclshError):
    """A text input (dataset file, CSV) failed to parse.

    Carries the 1-based line number when known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DuplicateIdError(FunclshError):
    """An item id was inserted or parsed twice."""


class ZeroNormError(FunclshError):
    """Cosine similarity requested for a (numerically) zero function."""


class TruncationError(FunclshError):
    """Adaptive truncation hit the term cap without meeting the tolerance."""


class BasisMismatchError(FunclshError):
    """Two embedded vectors do not live in the same embedding space."""


class UnsupportedMeasureError(FunclshError):
    """No sampling transform is implemented for the requested measure."""


class ZeroVectorError(FunclshError):
    """SimHash input is identically zero, so its sign bit is undefined."""


class UnsupportedPError(FunclshError):
    """No folded stable density is available for the requested p."""


class RangeError(FunclshError):
    """A numeric argument lies outside its admissible range."""


class EpsilonTooLargeError(FunclshError):
    """Perturbation budget must stay below the underlying distance."""


class KindError(FunclshError):
    """A distribution of the wrong kind was passed to an exact formula."""


class EmptyIndexError(FunclshError):
    """Query issued against an index with no items."""


class FormatVersionError(FunclshError):
    """Index file was written by an unknown format version."""


class ChecksumError(FunclshError):
    """Index file is truncated or corrupt; nothing was loaded."""

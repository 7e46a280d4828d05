"""Exception hierarchy.

Every error raised for bad input data derives from :class:`TileInspectError`,
which the command-line front end maps to exit status 3.
"""

from __future__ import annotations


class TileInspectError(ValueError):
    """Base class for all data errors raised by this package."""


# wavelet
class OddLengthError(TileInspectError):
    def __init__(self, length: int):
        super().__init__(f"signal length {length} is odd; Haar analysis needs an even length")
        self.length = length


class TooShortError(TileInspectError):
    def __init__(self, length: int):
        super().__init__(f"signal length {length} is too short; need at least 2 samples")
        self.length = length


class LengthMismatchError(TileInspectError):
    pass


class OddDimensionError(TileInspectError):
    def __init__(self, rows: int, cols: int):
        super().__init__(f"image is {rows}x{cols}; both dimensions must be even")
        self.rows, self.cols = rows, cols


class DimensionMismatchError(TileInspectError):
    pass


class NotDivisibleError(TileInspectError):
    def __init__(self, rows: int, cols: int, levels: int):
        super().__init__(
            f"NotDivisible: {rows}x{cols} cannot be halved {levels} times "
            f"(dimensions must be multiples of {2 ** levels}; use padding)"
        )
        self.rows, self.cols, self.levels = rows, cols, levels


class CorruptPyramidError(TileInspectError):
    pass


# inspection
class NegativeDistanceError(TileInspectError):
    pass


# metrics
class EmptyInputError(TileInspectError):
    pass


# imageio
class BadMagicError(TileInspectError):
    pass


class TruncatedDataError(LengthMismatchError):
    """Input ended before the declared payload did."""


class MaxvalUnsupportedError(TileInspectError):
    pass


class MalformedHeaderError(TileInspectError):
    pass


class VersionUnsupportedError(TileInspectError):
    pass


class BadHeaderError(TileInspectError):
    pass


class BadLabelError(TileInspectError):
    def __init__(self, line: int, label: str):
        super().__init__(f"line {line}: unknown label {label!r} (expected ok or defective)")
        self.line, self.label = line, label


class BadEntryError(TileInspectError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line


class DuplicatePathError(TileInspectError):
    def __init__(self, path: str):
        super().__init__(f"duplicate manifest path {path!r}")
        self.path = path


# synth
class BadSizeError(TileInspectError):
    pass


class ExtentTooLargeError(TileInspectError):
    pass


class CorpusIOError(TileInspectError):
    pass

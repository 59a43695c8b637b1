"""Exception hierarchy.

Every error raised on bad input derives from :class:`EncompError`, so the
CLI can map the whole family to the data-error exit code.
"""


class EncompError(ValueError):
    """Base class for all input and data errors."""


class DimensionMismatch(EncompError):
    pass


class NonFiniteValue(EncompError):
    pass


class TooFewRows(EncompError):
    pass


class InvalidFraction(EncompError):
    pass


class ZeroDensityAtSamplePoint(EncompError):
    pass


class DegenerateColumn(EncompError):
    pass


class AllCandidatesInvalid(EncompError):
    pass


class InsufficientData(EncompError):
    pass


class MissingColumn(EncompError):
    pass


class EmptyFile(EncompError):
    pass


class ParseError(EncompError):
    def __init__(self, row: int, col: str, value: str):
        super().__init__(f"cannot parse {value!r} at row {row}, column {col!r}")
        self.row = row
        self.col = col
        self.value = value

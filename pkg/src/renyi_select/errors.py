"""Exception hierarchy for the renyi_select package."""


class RenyiSelectError(Exception):
    """Base class for all errors raised by this package."""


# --- data loading / preparation ---

class MissingFile(RenyiSelectError):
    pass


class MissingLabelColumn(RenyiSelectError):
    pass


class ParseError(RenyiSelectError):
    """A cell failed to parse as a finite number.

    Attributes:
        row: 1-based data row (header excluded).
        column: column name.
    """

    def __init__(self, row, column, value):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(f"cannot parse {value!r} at row {row}, column {column!r}")


class EmptyDataset(RenyiSelectError):
    pass


class MaxSamplesBelowClassCount(RenyiSelectError):
    pass


# --- kernels / entropy ---

class NonPositiveBandwidth(RenyiSelectError):
    pass


class DimensionMismatch(RenyiSelectError):
    pass


class EigensolverFailure(RenyiSelectError):
    pass


class NegativeEigenvalue(RenyiSelectError):
    """An eigenvalue fell below the round-off band, i.e. the input matrix
    was not positive semidefinite to working precision."""


# --- selection ---

class NoRemainingFeatures(RenyiSelectError):
    pass


class InvalidPermutationCount(RenyiSelectError):
    pass


class InvalidProbability(RenyiSelectError):
    pass


# --- evaluation ---

class LengthMismatch(RenyiSelectError):
    pass


class TooFewSamples(RenyiSelectError):
    pass


class EmptyInput(RenyiSelectError):
    pass


class EmptyFeatureSubset(RenyiSelectError):
    pass
